#include "teichlab/dim.hpp"

#include <algorithm>
#include <cmath>

#include "teichlab/error.hpp"
#include "teichlab/fit.hpp"

namespace teichlab {

std::string convention_name(WidthConvention c) { return c == WidthConvention::Radius ? "radius" : "diameter"; }

CoverReport accumulate_cover(const std::vector<BadSetMask>& masks, double t, WidthConvention c) {
  CoverReport r{t, c, {}};
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const auto& m = masks[i];
    if (std::abs(m.grid.step - t) > 1e-12 * std::max(1.0, t)) fail(Errc::InconsistentLevels, "mask grid step differs from t");
    if (i > 0 && m.grid.level <= masks[i - 1].grid.level) fail(Errc::InconsistentLevels, "mask levels must increase strictly");
    const std::int64_t total = m.interval_count();
    if (static_cast<std::int64_t>(m.count()) > total) fail(Errc::InconsistentLevels, "more bad intervals than intervals");
    r.levels.push_back({m.grid.level, c == WidthConvention::Radius ? m.grid.radius() : m.grid.width(), static_cast<std::int64_t>(m.count()), total});
  }
  return r;
}

DimensionEstimate estimate_dimension(const CoverReport& r, const FitOptions& o) {
  const int L = static_cast<int>(r.levels.size());
  if (L < std::max(3, o.min_levels)) fail(Errc::InsufficientLevels, "need at least " + std::to_string(std::max(3, o.min_levels)) + " levels");
  if (!(o.fraction > 0 && o.fraction <= 1)) fail(Errc::InvalidArgument, "fit fraction must lie in (0, 1]");
  const int use = std::min(L, std::max(std::max(3, o.min_levels), static_cast<int>(std::ceil(o.fraction * L))));
  DimensionEstimate e;
  e.first_level = r.levels[static_cast<std::size_t>(L - use)].n;
  e.last_level = r.levels.back().n;
  if (r.levels.back().count == 0) {
    e.empty = true;
    return e;
  }
  std::vector<double> x, y;
  for (int i = L - use; i < L; ++i) {
    const auto& lv = r.levels[static_cast<std::size_t>(i)];
    if (lv.count == 0) continue;
    x.push_back(2 * r.t * lv.n);
    y.push_back(std::log(static_cast<double>(lv.count)));
  }
  e.levels_used = static_cast<int>(x.size());
  if (e.levels_used < 2) fail(Errc::InsufficientLevels, "fewer than two non-empty levels in the fit range");
  const LinearFit f = linear_fit(x, y);
  e.slope = f.slope * 2 * r.t;
  e.intercept = f.intercept;
  e.dim_upper = std::max(0.0, f.slope);
  e.residuals = f.residuals;
  e.rms_residual = f.rms_residual;
  return e;
}

std::vector<double> hausdorff_sum_check(const CoverReport& r, double beta) {
  if (!(beta > 0 && beta <= 1)) fail(Errc::InvalidArgument, "beta must lie in (0, 1]");
  std::vector<double> out;
  for (const auto& lv : r.levels) out.push_back(static_cast<double>(lv.count) * std::pow(lv.width, beta));
  return out;
}

std::vector<BadSetMask> full_masks(int levels, double t) {
  std::vector<BadSetMask> out;
  for (int n = 1; n <= levels; ++n) {
    BadSetMask m{{n, t}, MaskKind::Z, 0, {}};
    const std::int64_t total = m.grid.count();
    if (total > (std::int64_t{1} << 26)) fail(Errc::BudgetExceeded, "full mask too large");
    for (std::int64_t k = 0; k < total; ++k) m.bits.push_back(k);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<BadSetMask> singleton_masks(int levels, double t, double point) {
  std::vector<BadSetMask> out;
  for (int n = 1; n <= levels; ++n) {
    BadSetMask m{{n, t}, MaskKind::Z, 0, {}};
    m.bits.push_back(m.grid.index_of(point));
    out.push_back(std::move(m));
  }
  return out;
}

double cantor_step() { return 0.5 * std::log(3.0); }

std::vector<BadSetMask> cantor_masks(int levels) {
  std::vector<BadSetMask> out;
  std::vector<std::int64_t> cur{0};  // ternary words without the digit 1
  for (int n = 1; n <= levels; ++n) {
    std::vector<std::int64_t> next;
    for (auto k : cur) {
      next.push_back(3 * k);
      next.push_back(3 * k + 2);
    }
    cur = std::move(next);
    BadSetMask m{{n, cantor_step()}, MaskKind::Z, 0, cur};
    if (m.grid.count() != static_cast<std::int64_t>(std::llround(std::pow(3.0, n)))) fail(Errc::Internal, "ternary grid mismatch");
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace teichlab
