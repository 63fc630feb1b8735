#include "teichlab/sl2.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "teichlab/error.hpp"

namespace teichlab {

SL2Matrix::SL2Matrix(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d)) {
    fail(Errc::InvalidArgument, "SL2 matrix with non-finite entry");
  }
  const double scale = std::max(1.0, std::abs(a * d) + std::abs(b * c));
  if (std::abs(det() - 1.0) > 1e-12 * scale) fail(Errc::InvalidArgument, "matrix determinant is not 1: " + to_string(*this));
}

SL2Matrix SL2Matrix::operator*(const SL2Matrix& o) const {
  return SL2Matrix(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_);
}

SL2Matrix SL2Matrix::inverse() const noexcept {
  SL2Matrix m;
  m.a_ = d_;
  m.b_ = -b_;
  m.c_ = -c_;
  m.d_ = a_;
  return m;
}

SL2Matrix geodesic(double t) {
  if (!std::isfinite(t)) fail(Errc::InvalidArgument, "geodesic time must be finite");
  const double e = std::exp(t);
  return SL2Matrix(e, 0, 0, 1.0 / e);
}

SL2Matrix rotation(double theta) {
  if (!std::isfinite(theta)) fail(Errc::InvalidArgument, "rotation angle must be finite");
  const double c = std::cos(theta), s = std::sin(theta);
  return SL2Matrix(c, s, -s, c);
}

SL2Matrix horocycle(double s) {
  if (!std::isfinite(s)) fail(Errc::InvalidArgument, "horocycle parameter must be finite");
  return SL2Matrix(1, s, 0, 1);
}

SL2Matrix opposite_horocycle(double s) {
  if (!std::isfinite(s)) fail(Errc::InvalidArgument, "horocycle parameter must be finite");
  return SL2Matrix(1, 0, s, 1);
}

SL2Matrix make_matrix(MatrixKind kind, double param) {
  switch (kind) {
    case MatrixKind::Geodesic: return geodesic(param);
    case MatrixKind::Rotation: return rotation(param);
    case MatrixKind::Horocycle: return horocycle(param);
    case MatrixKind::OppositeHorocycle: return opposite_horocycle(param);
  }
  fail(Errc::InvalidArgument, "unknown matrix kind");
}

double max_abs_diff(const SL2Matrix& x, const SL2Matrix& y) {
  return std::max({std::abs(x.a() - y.a()), std::abs(x.b() - y.b()), std::abs(x.c() - y.c()), std::abs(x.d() - y.d())});
}

std::string to_string(const SL2Matrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << "[[" << m.a() << ", " << m.b() << "], [" << m.c() << ", " << m.d() << "]]";
  return os.str();
}

}  // namespace teichlab
