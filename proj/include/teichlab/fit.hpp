#pragma once

#include <vector>

namespace teichlab {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  std::vector<double> residuals;
  double rms_residual = 0;
};

// Ordinary least squares y ~ slope x + intercept; needs two distinct x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace teichlab
