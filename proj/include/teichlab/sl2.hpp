#pragma once

#include <complex>
#include <string>

namespace teichlab {

using Vec2 = std::complex<double>;

// Real 2x2 matrix of determinant one, [[a, b], [c, d]], acting on C = R^2.
class SL2Matrix {
 public:
  SL2Matrix() = default;
  // Throws InvalidArgument unless det is 1 to within 1e-12 (relative to the
  // entry scale) and all entries are finite.
  SL2Matrix(double a, double b, double c, double d);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }
  double det() const noexcept { return a_ * d_ - b_ * c_; }

  Vec2 apply(Vec2 v) const noexcept { return {a_ * v.real() + b_ * v.imag(), c_ * v.real() + d_ * v.imag()}; }
  Vec2 operator*(Vec2 v) const noexcept { return apply(v); }
  SL2Matrix operator*(const SL2Matrix& o) const;
  SL2Matrix inverse() const noexcept;

  static SL2Matrix identity() { return {}; }

 private:
  double a_ = 1, b_ = 0, c_ = 0, d_ = 1;
};

enum class MatrixKind { Geodesic, Rotation, Horocycle, OppositeHorocycle };

// g_t = diag(e^t, e^-t)
SL2Matrix geodesic(double t);
// r_theta = [[cos, sin], [-sin, cos]]
SL2Matrix rotation(double theta);
// h_s = [[1, s], [0, 1]]
SL2Matrix horocycle(double s);
// opposite horocycle [[1, 0], [s, 1]]
SL2Matrix opposite_horocycle(double s);

SL2Matrix make_matrix(MatrixKind kind, double param);

double max_abs_diff(const SL2Matrix& x, const SL2Matrix& y);

std::string to_string(const SL2Matrix& m);

}  // namespace teichlab
