#include "teichlab/suspension.hpp"

#include <algorithm>
#include <cmath>

#include "teichlab/error.hpp"

namespace teichlab {

namespace {

std::vector<double> lengths_as_double(const Iet& t) {
  std::vector<double> out;
  for (const auto& l : t.lengths()) out.push_back(to_double(l));
  return out;
}

// b_1 + ... + b_i
double top_height(const SuspensionData& s, int i) {
  double acc = 0;
  for (int j = 1; j <= i; ++j) acc += s.b[static_cast<std::size_t>(j - 1)];
  return acc;
}

}  // namespace

void validate(const SuspensionData& s) {
  const int d = s.base.size();
  if (static_cast<int>(s.b.size()) != d) fail(Errc::DimensionMismatch, "suspension vector b has the wrong length");
  double scale = 0;
  for (double v : s.b) {
    if (!std::isfinite(v)) fail(Errc::InvalidSuspension, "non-finite entry in b");
    scale = std::max(scale, std::abs(v));
  }
  const double tol = 1e-12 * std::max(1.0, scale);
  double sum = 0;
  for (double v : s.b) sum += v;
  if (std::abs(sum) > tol) fail(Errc::InvalidSuspension, "entries of b must sum to 0");
  const Permutation& p = s.base.perm();
  double top = 0, bottom = 0;
  for (int k = 1; k < d; ++k) {
    top += s.b[static_cast<std::size_t>(k - 1)];
    bottom += s.b[static_cast<std::size_t>(p.inverse(k) - 1)];
    if (!(top > tol)) fail(Errc::InvalidSuspension, "top partial sum b_1 + ... + b_" + std::to_string(k) + " is not positive");
    if (!(bottom < -tol)) fail(Errc::InvalidSuspension, "bottom partial sum over the first " + std::to_string(k) + " slots is not negative");
  }
}

bool is_valid(const SuspensionData& s) {
  try {
    validate(s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::vector<double> heights(const SuspensionData& s) {
  validate(s);
  const int d = s.base.size();
  QForm q(s.base.perm());
  std::vector<double> h(static_cast<std::size_t>(d), 0.0);
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= d; ++j) h[static_cast<std::size_t>(i - 1)] += q(i, j) * s.b[static_cast<std::size_t>(j - 1)];
  return h;
}

double suspension_area(const SuspensionData& s) {
  const auto h = heights(s);
  const auto lam = lengths_as_double(s.base);
  double a = 0;
  for (std::size_t i = 0; i < h.size(); ++i) a += lam[i] * h[i];
  return a;
}

int top_vertex_index(int d, int i) {
  if (i == 0) return 0;
  if (i == d) return d;
  return 2 * d - i;
}

TranslationSurface suspend(const SuspensionData& s) {
  validate(s);
  const int d = s.base.size();
  const Permutation& p = s.base.perm();
  const auto lam = lengths_as_double(s.base);
  auto zeta = [&](int j) { return Vec2(lam[static_cast<std::size_t>(j - 1)], s.b[static_cast<std::size_t>(j - 1)]); };

  std::vector<Vec2> poly(static_cast<std::size_t>(2 * d));
  Vec2 acc = 0;
  for (int k = 1; k < d; ++k) {
    acc += zeta(p.inverse(k));
    poly[static_cast<std::size_t>(k)] = acc;  // B_k
  }
  Vec2 end = 0;
  for (int j = 1; j <= d; ++j) end += zeta(j);
  poly[static_cast<std::size_t>(d)] = Vec2(end.real(), 0.0);  // E, on the real axis since sum b = 0
  acc = 0;
  for (int k = 1; k < d; ++k) {
    acc += zeta(k);
    poly[static_cast<std::size_t>(2 * d - k)] = acc;  // T_k
  }
  std::vector<std::pair<EdgeRef, EdgeRef>> glue;
  for (int j = 1; j <= d; ++j) glue.push_back({{0, p(j) - 1}, {0, 2 * d - j}});
  try {
    return TranslationSurface({poly}, glue);
  } catch (const Error& e) {
    fail(Errc::InvalidSuspension, std::string("suspension polygon rejected: ") + e.what());
  }
}

std::vector<NamedSuspension> shipped_suspensions() {
  std::vector<NamedSuspension> out;
  out.push_back({"rotation-third", {Iet({make_rational(1, 3), make_rational(2, 3)}, Permutation({2, 1})), {1.0, -1.0}}});
  // F30 / F31
  const long f30 = 832040, f31 = 1346269;
  out.push_back({"rotation-golden", {Iet({make_rational(f31 - f30, f31), make_rational(f30, f31)}, Permutation({2, 1})), {1.0, -1.0}}});
  out.push_back({"reversal-3",
                 {Iet({Rational(1), make_rational(414213562, 1000000000), make_rational(732050808, 1000000000)}, Permutation({3, 2, 1})),
                  {2.0, -0.5, -1.5}}});
  out.push_back({"reversal-4",
                 {Iet({make_rational(37, 101), make_rational(58, 89), make_rational(23, 47), make_rational(71, 113)}, Permutation({4, 3, 2, 1})),
                  {3.0, -1.0, 1.0, -3.0}}});
  out.push_back({"cyclic-4",
                 {Iet({make_rational(29, 53), make_rational(41, 67), make_rational(17, 31), make_rational(83, 97)}, Permutation({2, 4, 1, 3})),
                  {1.0, 2.0, -2.5, -0.5}}});
  for (const auto& e : out) validate(e.data);
  return out;
}

ShearRange max_admissible_shear(const SuspensionData& s) {
  validate(s);
  const auto lam = lengths_as_double(s.base);
  ShearRange r{INFINITY, INFINITY};
  for (std::size_t j = 0; j < lam.size(); ++j) {
    if (s.b[j] < 0) r.pos = std::min(r.pos, lam[j] / -s.b[j]);
    if (s.b[j] > 0) r.neg = std::min(r.neg, lam[j] / s.b[j]);
  }
  return r;
}

LocalProductReport verify_local_product(const SuspensionData& s, const std::vector<double>& shears, double bound) {
  validate(s);
  const ShearRange range = max_admissible_shear(s);
  for (double sigma : shears) {
    if (!(sigma > -range.neg && sigma < range.pos)) {
      fail(Errc::PreconditionViolated, "shear " + std::to_string(sigma) + " leaves lambda + sigma b outside the positive cone");
    }
  }
  const TranslationSurface x = suspend(s);
  const auto lam = lengths_as_double(s.base);
  LocalProductReport rep;
  for (double sigma : shears) {
    const TranslationSurface lhs = act(horocycle(sigma), x);
    std::vector<Rational> shifted;
    for (std::size_t j = 0; j < lam.size(); ++j) shifted.push_back(from_double(lam[j] + sigma * s.b[j]));
    const TranslationSurface rhs = suspend({Iet(shifted, s.base.perm()), s.b});

    double worst = 0;
    for (int k = 0; k < static_cast<int>(x.polygon(0).size()); ++k) worst = std::max(worst, std::abs(lhs.vertex(0, k) - rhs.vertex(0, k)));
    const auto a = saddle_connections(lhs, bound), b = saddle_connections(rhs, bound * (1 + 1e-6));
    const auto a_wide = saddle_connections(lhs, bound * (1 + 1e-6));
    auto nearest = [](const std::vector<SaddleConnection>& pool, Vec2 w) {
      double best = INFINITY;
      for (const auto& c : pool) best = std::min(best, std::abs(c.holonomy - w));
      return best;
    };
    for (const auto& c : a) worst = std::max(worst, nearest(b, c.holonomy));
    for (const auto& c : b) {
      if (norm_of(c.holonomy, Norm::Max) <= bound) worst = std::max(worst, nearest(a_wide, c.holonomy));
    }
    rep.connections_compared += a.size();
    rep.per_sample.push_back(worst);
    rep.max_discrepancy = std::max(rep.max_discrepancy, worst);
  }
  return rep;
}

Transversal base_transversal(const SuspensionData& s) { return {0, Vec2(0, 0), to_double(s.base.total())}; }

ReturnSample trace_first_return(const TranslationSurface& x, const Transversal& tr, double offset) {
  if (!(offset > 0 && offset < tr.length)) fail(Errc::OutOfDomain, "sample offset outside the open transversal");
  const double scale = std::sqrt(x.area());
  const double snap = 1e-12 * scale, singular = 1e-10 * scale;
  int poly = tr.polygon;
  Vec2 z = tr.start + Vec2(offset, 0);
  double time = 0;
  for (int step = 0; step < 100000; ++step) {
    const auto& P = x.polygon(poly);
    const int n = static_cast<int>(P.size());
    double exit_y = INFINITY;
    int exit_edge = -1;
    for (int e = 0; e < n; ++e) {
      const Vec2 a = P[static_cast<std::size_t>(e)], b = P[static_cast<std::size_t>((e + 1) % n)];
      if (a.real() == b.real()) continue;
      const double u = (z.real() - a.real()) / (b.real() - a.real());
      if (u < -1e-12 || u > 1 + 1e-12) continue;
      const double y = a.imag() + u * (b.imag() - a.imag());
      if (y > z.imag() + snap && y < exit_y) {
        exit_y = y;
        exit_edge = e;
      }
    }
    if (exit_edge < 0) fail(Errc::SingularTrajectory, "vertical ray leaves the polygon through no edge");
    if (poly == tr.polygon && z.real() > tr.start.real() && z.real() < tr.start.real() + tr.length && tr.start.imag() > z.imag() + snap &&
        tr.start.imag() <= exit_y) {
      const Vec2 hit(z.real(), tr.start.imag());
      for (const auto& v : P) {
        if (std::abs(v - hit) < singular) fail(Errc::SingularTrajectory, "trajectory returns onto a vertex");
      }
      return {offset, z.real() - tr.start.real(), time + (tr.start.imag() - z.imag())};
    }
    const Vec2 q(z.real(), exit_y);
    const Vec2 a = P[static_cast<std::size_t>(exit_edge)], b = P[static_cast<std::size_t>((exit_edge + 1) % n)];
    if (std::abs(q - a) < singular || std::abs(q - b) < singular) fail(Errc::SingularTrajectory, "trajectory hits a cone point");
    const EdgeRef to = x.partner({poly, exit_edge});
    // the gluing translation sends b to the partner's first vertex
    const Vec2 shift = x.vertex(to.polygon, to.edge) - b;
    time += exit_y - z.imag();
    z = q + shift;
    poly = to.polygon;
    if (poly == tr.polygon && std::abs(z.imag() - tr.start.imag()) <= snap && z.real() > tr.start.real() &&
        z.real() < tr.start.real() + tr.length) {
      return {offset, z.real() - tr.start.real(), time};
    }
  }
  fail(Errc::Internal, "vertical trajectory did not return within 100000 crossings");
}

FirstReturnTable first_return_oracle(const TranslationSurface& x, const Transversal& tr, int samples, int retry_budget) {
  if (samples < 1) fail(Errc::InvalidArgument, "need at least one sample");
  if (!(tr.length > 0)) fail(Errc::InvalidArgument, "transversal length must be positive");
  FirstReturnTable out;
  const double spacing = tr.length / samples;
  for (int k = 0; k < samples; ++k) {
    double at = (k + 0.5) * spacing;
    for (int attempt = 0;; ++attempt) {
      try {
        out.samples.push_back(trace_first_return(x, tr, at));
        break;
      } catch (const Error& e) {
        if (e.code() != Errc::SingularTrajectory || attempt >= retry_budget) throw;
        ++out.resampled;
        at += spacing * 1e-3 * (attempt + 1);
      }
    }
  }
  const double tol = 1e-9 * std::max(1.0, tr.length);
  auto same = [&](const ReturnSample& u, const ReturnSample& w) {
    return std::abs((u.image - u.x) - (w.image - w.x)) <= tol && std::abs(u.time - w.time) <= tol;
  };
  for (std::size_t k = 0; k < out.samples.size(); ++k) {
    const auto& s = out.samples[k];
    if (k == 0 || !same(out.samples[k - 1], s)) {
      if (k > 0) {
        // bisect for the discontinuity between samples k-1 and k
        double lo = out.samples[k - 1].x, hi = s.x;
        const ReturnSample left = out.samples[k - 1];
        while (hi - lo > 1e-12 * tr.length) {
          const double mid = 0.5 * (lo + hi);
          try {
            if (same(trace_first_return(x, tr, mid), left)) {
              lo = mid;
            } else {
              hi = mid;
            }
          } catch (const Error& e) {
            if (e.code() != Errc::SingularTrajectory) throw;
            lo = hi = mid;
          }
        }
        const double bp = 0.5 * (lo + hi);
        out.breakpoints.push_back(bp);
        out.pieces.back().end = bp;
      }
      out.pieces.push_back({k == 0 ? 0.0 : out.breakpoints.back(), tr.length, s.image - s.x, s.time});
    }
  }
  return out;
}

SaddleConnection short_interval_saddle_connection(const SuspensionData& s, int n) {
  validate(s);
  if (n < 1) fail(Errc::InvalidArgument, "n must be >= 1");
  const Iet& t = s.base;
  const int d = t.size();
  const TranslationSurface x = suspend(s);
  const auto h = heights(s);
  const PartitionReport rep = partition_report(t, n);
  if (rep.collision) fail(Errc::SingularTrajectory, "partition has a collision at depth " + std::to_string(n));

  // shortest interval [a, b)
  Rational a, b;
  bool have = false;
  for (std::size_t k = 0; k < rep.cut_points.size(); ++k) {
    const Rational right = k + 1 < rep.cut_points.size() ? rep.cut_points[k + 1] : t.total();
    if (right - rep.cut_points[k] == rep.epsilon_n) {
      a = rep.cut_points[k];
      b = right;
      have = true;
      break;
    }
  }
  if (!have) fail(Errc::Internal, "shortest interval not found");

  auto discontinuity = [&](const Rational& y) {
    for (int i = 1; i < d; ++i)
      if (t.betas()[static_cast<std::size_t>(i)] == y) return i;
    return 0;
  };
  struct Hit {
    int vertex;
    double height;
  };
  // Right limits along the line over a.
  auto left_line = [&]() -> Hit {
    Rational y = a;
    double base = 0;
    for (int m = 0; m <= n; ++m) {
      if (sgn(y) == 0) return {0, base};
      if (int i = discontinuity(y)) return {top_vertex_index(d, i), base + top_height(s, i)};
      const int letter = t.interval_of(y);
      base += h[static_cast<std::size_t>(letter - 1)];
      y += t.translation(letter);
    }
    fail(Errc::Internal, "left boundary line meets no singularity within n returns");
  };
  // Left limits along the line over b.
  auto right_line = [&]() -> Hit {
    Rational y = b;
    double base = 0;
    for (int m = 0; m <= n; ++m) {
      if (y == t.total()) return {d, base};
      if (int i = discontinuity(y)) return {top_vertex_index(d, i), base + top_height(s, i)};
      int letter = 1;
      while (t.betas()[static_cast<std::size_t>(letter)] < y) ++letter;
      base += h[static_cast<std::size_t>(letter - 1)];
      y += t.translation(letter);
    }
    fail(Errc::Internal, "right boundary line meets no singularity within n returns");
  };
  const Hit L = left_line(), R = right_line();
  SaddleConnection sc;
  sc.holonomy = Vec2(to_double(b - a), R.height - L.height);
  sc.start_class = x.vertex_class(0, L.vertex);
  sc.end_class = x.vertex_class(0, R.vertex);
  return sc;
}

}  // namespace teichlab
