#include <cmath>
#include <numbers>

#include "doctest.h"
#include "teichlab/error.hpp"
#include "teichlab/height.hpp"
#include "teichlab/rng.hpp"

using namespace teichlab;

TEST_CASE("height values") {
  HeightFunction h;
  h.s = 1;
  auto t = square_torus();
  CHECK(height_eval(h, t) == doctest::Approx(1.0));
  CHECK(height_eval(h, act(geodesic(1), t)) == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
  h.norm = Norm::Max;
  CHECK(height_eval(h, act(geodesic(1), t)) == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
  CHECK(height_from_systole(h, 4.0) == 1.0);
  CHECK_THROWS_AS(height_from_systole(h, 0.0), Error);
}

TEST_CASE("property: drift bound and rotation invariance") {
  Rng rng(8);
  HeightFunction h;
  h.s = 0.5;
  for (int trial = 0; trial < 100; ++trial) {
    const auto name = builtin_surface_names()[static_cast<std::size_t>(trial % 3)];
    auto x = act(rotation(rng.uniform(0, 6.3)) * geodesic(rng.uniform(0, 1.5)) * rotation(rng.uniform(0, 6.3)), builtin_surface(name));
    const double a0 = height_eval(h, x);
    for (double t = 0; t <= 3.0 + 1e-12; t += 0.5) {
      const double at = height_eval(h, act(geodesic(t), x));
      CHECK(at <= std::exp(h.s * t) * a0 * (1 + 1e-9));
      CHECK(at >= std::exp(-h.s * t) * a0 * (1 - 1e-9));
    }
    CHECK(height_eval(h, act(rotation(rng.uniform(0, 6.3)), x)) == doctest::Approx(a0).epsilon(1e-9));
  }
}

TEST_CASE("circle average") {
  HeightFunction h;
  h.params.t0 = 1;
  auto t = square_torus();
  CHECK_THROWS_AS(verify_circle_average(h, t, 0.5), Error);
  auto c = verify_circle_average(h, t, 2.0);
  CHECK(c.lhs >= 1.0);
  CHECK(c.alpha_x == 1.0);
  CHECK(c.quadrature_error < 1e-3);
  // monotone in b
  h.params.b = c.lhs - 0.5 * c.alpha_x + 1e-9;
  CHECK(verify_circle_average(h, t, 2.0).satisfied);
  h.params.b += 1;
  CHECK(verify_circle_average(h, t, 2.0).satisfied);
  h.params.b = 0;
  CHECK_FALSE(verify_circle_average(h, t, 2.0).satisfied);

  QuadratureOptions coarse;
  coarse.nodes = 8;
  coarse.max_adjacent_ratio = 1.01;
  try {
    verify_circle_average(h, act(geodesic(1.0), t), 3.0, coarse);
    FAIL("expected QuadratureUnstable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::QuadratureUnstable);
  }
}

TEST_CASE("horocycle averages") {
  HeightFunction flat;
  flat.s = 0;
  auto t = square_torus();
  auto iv = verify_horocycle_average(flat, t, 2.0, HorocycleMode::Interval);
  CHECK(iv.lhs == doctest::Approx(2.0).epsilon(1e-12));
  flat.params.b = 2.0;
  CHECK(verify_horocycle_average(flat, t, 2.0, HorocycleMode::Interval).satisfied);
  auto gs = verify_horocycle_average(flat, t, 2.0, HorocycleMode::Gaussian);
  CHECK(gs.lhs == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-6));

  HeightFunction h;
  QuadratureOptions q;
  q.nodes = 4000;
  auto a = verify_horocycle_average(h, t, 2.0, HorocycleMode::Interval, q);
  // same nodes on [-1,1] inside the gaussian grid (spacing 12/12000 = 2/2000)
  QuadratureOptions qg;
  qg.nodes = 12000;
  auto g = verify_horocycle_average(h, t, 2.0, HorocycleMode::Gaussian, qg);
  CHECK(g.lhs >= std::exp(-1.0) * a.lhs);
  CHECK(g.truncation_error < 1e-14);
}
