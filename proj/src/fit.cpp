#include "teichlab/fit.hpp"

#include <cmath>

#include "teichlab/error.hpp"

namespace teichlab {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) fail(Errc::DimensionMismatch, "fit: x and y differ in length");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) fail(Errc::InvalidArgument, "fit needs at least two distinct abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.residuals.push_back(y[i] - (f.slope * x[i] + f.intercept));
    ss += f.residuals.back() * f.residuals.back();
  }
  f.rms_residual = std::sqrt(ss / n);
  return f;
}

}  // namespace teichlab
