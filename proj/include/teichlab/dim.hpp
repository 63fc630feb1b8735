#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "teichlab/dynamics.hpp"

namespace teichlab {

// Covers use intervals of P_n; the recorded width is either the radius
// e^{-2tn} or the diameter 2e^{-2tn}. Slopes do not depend on the choice.
enum class WidthConvention { Radius, Diameter };
std::string convention_name(WidthConvention c);

struct CoverLevel {
  int n = 0;
  double width = 0;
  std::int64_t count = 0;
  std::int64_t total = 0;
};

struct CoverReport {
  double t = 1;
  WidthConvention convention = WidthConvention::Diameter;
  std::vector<CoverLevel> levels;
};

// Bad-interval counts per level. Throws InconsistentLevels unless levels are
// strictly increasing and every grid has step t.
CoverReport accumulate_cover(const std::vector<BadSetMask>& masks, double t, WidthConvention c = WidthConvention::Diameter);

struct FitOptions {
  double fraction = 0.5;  // fit the finest ceil(fraction * L) levels
  int min_levels = 3;
};

struct DimensionEstimate {
  double slope = 0;      // d log(count) / dn
  double intercept = 0;
  double dim_upper = 0;  // slope / (2t), floored at 0
  bool empty = false;    // no bad interval at the finest level
  int first_level = 0, last_level = 0;
  int levels_used = 0;
  std::vector<double> residuals;
  double rms_residual = 0;
};

// Least squares of log(count) against 2tn over the finest levels; levels with
// count 0 are skipped. Throws InsufficientLevels below min_levels.
DimensionEstimate estimate_dimension(const CoverReport& r, const FitOptions& o = {});

// sum count * width^beta, one entry per level.
std::vector<double> hausdorff_sum_check(const CoverReport& r, double beta);

// Synthetic covers for calibration, on grids of step t.
std::vector<BadSetMask> full_masks(int levels, double t);
std::vector<BadSetMask> singleton_masks(int levels, double t, double point);
// Middle-thirds Cantor set of [-1, 1] on grids of step log(3)/2, so that P_n
// is the n-th ternary subdivision: 2^n marked intervals at level n.
std::vector<BadSetMask> cantor_masks(int levels);
double cantor_step();  // log(3) / 2

}  // namespace teichlab
