#include "teichlab/height.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "teichlab/error.hpp"
#include "teichlab/parallel.hpp"

namespace teichlab {

double height_from_systole(const HeightFunction& h, double sys) {
  if (!(sys > 0)) fail(Errc::InvalidArgument, "systole must be positive");
  return std::max(1.0, std::pow(sys, -h.s));
}

double height_eval(const HeightFunction& h, const Triangulation& tr) { return height_from_systole(h, systole(tr, h.norm)); }

double height_eval(const HeightFunction& h, const TranslationSurface& x) { return height_from_systole(h, systole(x, h.norm)); }

int default_quadrature_nodes(double t, double length) {
  return std::max(64, static_cast<int>(std::ceil(4.0 * std::exp(2 * t) * length)));
}

namespace {

// alpha(g_t m x) at each parameter value.
std::vector<double> sample(const HeightFunction& h, const Triangulation& base, double t, const std::vector<double>& params,
                           SL2Matrix (*family)(double)) {
  return parallel_map<double>(params.size(), [&](std::size_t i) {
    Triangulation tr = base;
    act_in_place(geodesic(t) * family(params[i]), tr);
    make_delaunay(tr);
    return height_eval(h, tr);
  });
}

double adjacent_ratio(const std::vector<double>& f, bool periodic) {
  double r = 1;
  const std::size_t n = f.size();
  for (std::size_t i = 0; i + 1 < n + (periodic ? 1 : 0); ++i) {
    const double u = f[i], w = f[(i + 1) % n];
    r = std::max(r, std::max(u / w, w / u));
  }
  return r;
}

void finish(AverageCheck& c, const HeightFunction& h) {
  c.rhs_bound = h.params.a * c.alpha_x + h.params.b;
  c.satisfied = c.lhs <= c.rhs_bound;
}

void check_inputs(const HeightFunction& h, double t, const QuadratureOptions& q) {
  if (!(t > h.params.t0)) fail(Errc::PreconditionViolated, "averaging time must exceed t0");
  if (q.nodes < 0 || (q.nodes > 0 && q.nodes < 4)) fail(Errc::InvalidArgument, "quadrature needs at least 4 nodes");
  if (!(q.max_adjacent_ratio > 1)) fail(Errc::InvalidArgument, "max_adjacent_ratio must exceed 1");
}

}  // namespace

AverageCheck verify_circle_average(const HeightFunction& h, const TranslationSurface& x, double t, const QuadratureOptions& q) {
  check_inputs(h, t, q);
  int n = q.nodes ? q.nodes : default_quadrature_nodes(t, 2 * std::numbers::pi);
  n += n % 2;
  const Triangulation base = delaunay_triangulation(x);
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) theta[static_cast<std::size_t>(k)] = 2 * std::numbers::pi * k / n;
  const auto f = sample(h, base, t, theta, rotation);

  AverageCheck c;
  c.nodes = n;
  c.max_adjacent_ratio = adjacent_ratio(f, true);
  if (c.max_adjacent_ratio > q.max_adjacent_ratio) {
    fail(Errc::QuadratureUnstable, "circle average: adjacent nodes differ by a factor " + std::to_string(c.max_adjacent_ratio));
  }
  double full = 0, half = 0;
  for (int k = 0; k < n; ++k) {
    full += f[static_cast<std::size_t>(k)];
    if (k % 2 == 0) half += f[static_cast<std::size_t>(k)];
  }
  c.lhs = full / n;
  c.quadrature_error = std::abs(c.lhs - half / (n / 2));
  c.alpha_x = height_eval(h, base);
  finish(c, h);
  return c;
}

AverageCheck verify_horocycle_average(const HeightFunction& h, const TranslationSurface& x, double t, HorocycleMode mode,
                                      const QuadratureOptions& q) {
  check_inputs(h, t, q);
  const double half_width = mode == HorocycleMode::Interval ? 1.0 : 6.0;
  int n = q.nodes ? q.nodes : default_quadrature_nodes(t, 2 * half_width);
  n += n % 2;  // n intervals, n + 1 nodes
  const Triangulation base = delaunay_triangulation(x);
  std::vector<double> s(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) s[static_cast<std::size_t>(k)] = -half_width + 2 * half_width * k / n;
  auto f = sample(h, base, t, s, horocycle);

  AverageCheck c;
  c.nodes = n + 1;
  c.max_adjacent_ratio = adjacent_ratio(f, false);
  if (c.max_adjacent_ratio > q.max_adjacent_ratio) {
    fail(Errc::QuadratureUnstable, "horocycle average: adjacent nodes differ by a factor " + std::to_string(c.max_adjacent_ratio));
  }
  double fmax = 0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    fmax = std::max(fmax, f[k]);
    if (mode == HorocycleMode::Gaussian) f[k] *= std::exp(-s[k] * s[k]);
  }
  const double step = 2 * half_width / n;
  auto trapezoid = [&](int stride) {
    double acc = 0;
    for (int k = 0; k <= n; k += stride) acc += (k == 0 || k == n ? 0.5 : 1.0) * f[static_cast<std::size_t>(k)];
    return acc * step * stride;
  };
  c.lhs = trapezoid(1);
  c.quadrature_error = std::abs(c.lhs - trapezoid(2));
  if (mode == HorocycleMode::Gaussian) c.truncation_error = std::sqrt(std::numbers::pi) * std::erfc(6.0) * fmax;
  c.alpha_x = height_eval(h, base);
  finish(c, h);
  return c;
}

}  // namespace teichlab
