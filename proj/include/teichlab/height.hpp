#pragma once

#include "teichlab/saddle.hpp"
#include "teichlab/surface.hpp"

namespace teichlab {

// Contraction data: a is the averaging factor, b the additive constant, sigma
// the drift exponent and t0 the smallest time at which the averaging
// inequality is claimed.
struct HeightParams {
  double a = 0.5;
  double b = 0.0;
  double sigma = 0.5;
  double t0 = 0.0;
};

// alpha(x) = max(1, systole(x)^-s). Euclidean systole by default so that alpha
// is rotation invariant; the max-norm reading is available through `norm`.
struct HeightFunction {
  double s = 0.5;
  HeightParams params;
  Norm norm = Norm::Euclidean;
};

double height_from_systole(const HeightFunction& h, double sys);
double height_eval(const HeightFunction& h, const TranslationSurface& x);
double height_eval(const HeightFunction& h, const Triangulation& delaunay_tr);

struct AverageCheck {
  double lhs = 0;             // the average
  double alpha_x = 0;         // alpha(x)
  double rhs_bound = 0;       // a * alpha(x) + b
  bool satisfied = false;     // lhs <= rhs_bound
  double quadrature_error = 0;  // |full rule - half rule|
  double truncation_error = 0;  // gaussian tail beyond |s| = 6
  double max_adjacent_ratio = 0;
  int nodes = 0;
};

struct QuadratureOptions {
  int nodes = 0;                     // 0: 4 e^{2t} per unit length, at least 64
  double max_adjacent_ratio = 2.0;   // QuadratureUnstable above this
};

// (1/2pi) int_0^{2pi} alpha(g_t r_theta x) dtheta, periodic trapezoid rule.
// Requires t > t0. Throws PreconditionViolated, QuadratureUnstable.
AverageCheck verify_circle_average(const HeightFunction& h, const TranslationSurface& x, double t, const QuadratureOptions& q = {});

enum class HorocycleMode { Interval, Gaussian };

// Interval: int_{-1}^{1} alpha(g_t h_s x) ds. Gaussian: int_{-6}^{6} e^{-s^2}
// alpha(g_t h_s x) ds, the literal weight (unnormalized, variance 1/2).
AverageCheck verify_horocycle_average(const HeightFunction& h, const TranslationSurface& x, double t, HorocycleMode mode,
                                      const QuadratureOptions& q = {});

// Default node count for an integrand of the given length at time t.
int default_quadrature_nodes(double t, double length);

}  // namespace teichlab
