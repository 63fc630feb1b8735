#include <cmath>

#include "doctest.h"
#include "teichlab/dim.hpp"
#include "teichlab/error.hpp"

using namespace teichlab;

namespace {

// Nested family: the first `free` ternary digits are arbitrary, later ones
// avoid 1. Full up to level `free`, Cantor-like after.
std::vector<BadSetMask> delayed_cantor(int levels, int free) {
  auto masks = full_masks(levels, cantor_step());
  for (auto& m : masks) {
    std::vector<std::int64_t> kept;
    for (auto k : m.bits) {
      bool ok = true;
      auto r = k;
      for (int pos = m.grid.level; pos > free; --pos, r /= 3) ok = ok && r % 3 != 1;
      if (ok) kept.push_back(k);
    }
    m.bits = std::move(kept);
  }
  return masks;
}

CoverReport scaled(CoverReport r, std::int64_t factor) {
  for (auto& lv : r.levels) lv.count *= factor;
  return r;
}

}  // namespace

TEST_CASE("cover counts") {
  const auto full = accumulate_cover(full_masks(4, 1.0), 1.0);
  for (const auto& lv : full.levels) CHECK(lv.count == lv.total);
  const auto single = accumulate_cover(singleton_masks(6, 1.0, 0.3), 1.0);
  for (const auto& lv : single.levels) CHECK(lv.count == 1);
  const auto cantor = accumulate_cover(cantor_masks(9), cantor_step());
  for (const auto& lv : cantor.levels) {
    CHECK(lv.count == (std::int64_t{1} << lv.n));
    CHECK(lv.total == static_cast<std::int64_t>(std::llround(std::pow(3.0, lv.n))));
    CHECK(lv.width == doctest::Approx(2 * std::pow(3.0, -lv.n)));
  }
  const auto radius = accumulate_cover(cantor_masks(3), cantor_step(), WidthConvention::Radius);
  CHECK(radius.levels[0].width == doctest::Approx(1.0 / 3));
}

TEST_CASE("level consistency") {
  auto masks = cantor_masks(4);
  CHECK_THROWS_AS(accumulate_cover(masks, 1.0), Error);
  std::swap(masks[1], masks[2]);
  try {
    accumulate_cover(masks, cantor_step());
    FAIL("expected InconsistentLevels");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InconsistentLevels);
  }
  try {
    estimate_dimension(accumulate_cover(cantor_masks(2), cantor_step()));
    FAIL("expected InsufficientLevels");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InsufficientLevels);
  }
}

TEST_CASE("calibration families") {
  const auto full = estimate_dimension(accumulate_cover(full_masks(6, 1.0), 1.0));
  CHECK(full.dim_upper == doctest::Approx(1.0).epsilon(0.02));
  const auto point = estimate_dimension(accumulate_cover(singleton_masks(8, 1.0, -0.77), 1.0));
  CHECK(std::abs(point.dim_upper) <= 0.02);
  const auto cantor = estimate_dimension(accumulate_cover(cantor_masks(10), cantor_step()));
  CHECK(std::abs(cantor.dim_upper - std::log(2.0) / std::log(3.0)) <= 0.05);
  CHECK(cantor.slope == doctest::Approx(std::log(2.0)));
  CHECK(cantor.levels_used == 5);
  CHECK(cantor.first_level == 6);
  CHECK(cantor.rms_residual < 1e-9);
}

TEST_CASE("empty covers") {
  auto masks = singleton_masks(5, 1.0, 0.1);
  for (auto& m : masks) m.bits.clear();
  const auto e = estimate_dimension(accumulate_cover(masks, 1.0));
  CHECK(e.empty);
  CHECK(e.dim_upper == 0.0);
}

TEST_CASE("scale equivariance") {
  const auto r = accumulate_cover(delayed_cantor(9, 3), cantor_step());
  const auto a = estimate_dimension(r), b = estimate_dimension(scaled(r, 7));
  CHECK(a.slope == doctest::Approx(b.slope).epsilon(1e-12));
  CHECK(b.intercept - a.intercept == doctest::Approx(std::log(7.0)));
}

TEST_CASE("appending levels of a nested family does not raise the estimate") {
  for (int free : {2, 4}) {
    const auto masks = delayed_cantor(12, free);
    for (std::size_t i = 1; i < masks.size(); ++i)
      for (auto k : masks[i].bits) CHECK(masks[i - 1].contains(k / 3));
  double prev = INFINITY;
  for (int L = 4; L <= 12; ++L) {
    const std::vector<BadSetMask> head(masks.begin(), masks.begin() + L);
    const double d = estimate_dimension(accumulate_cover(head, cantor_step()), {1.0, 3}).dim_upper;
    CAPTURE(free);
    CAPTURE(L);
    CHECK(d <= prev + 1e-12);
    prev = d;
  }
  CHECK(prev >= std::log(2.0) / std::log(3.0) - 1e-9);
  }
}

TEST_CASE("Hausdorff sums") {
  const auto full = hausdorff_sum_check(accumulate_cover(full_masks(5, 1.0), 1.0), 1.0);
  for (std::size_t i = 1; i < full.size(); ++i) CHECK(full[i] == doctest::Approx(2.0).epsilon(0.01));
  const auto r = accumulate_cover(cantor_masks(12), cantor_step());
  const double d = estimate_dimension(r).dim_upper;
  const auto above = hausdorff_sum_check(r, d + 0.06);
  for (std::size_t i = 1; i < above.size(); ++i) CHECK(above[i] < above[i - 1]);
  CHECK(above.back() < 0.6 * above.front());
  const auto below = hausdorff_sum_check(r, d - 0.06);
  for (std::size_t i = 1; i < below.size(); ++i) CHECK(below[i] > below[i - 1]);
  CHECK_THROWS_AS(hausdorff_sum_check(r, 0.0), Error);
}
