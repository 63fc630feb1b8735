#include "teichlab/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>

#include "teichlab/error.hpp"
#include "teichlab/fit.hpp"
#include "teichlab/parallel.hpp"

namespace teichlab {

namespace {

std::atomic<std::uint64_t> g_clamps{0};

// Longest single stretch applied before flipping back to Delaunay.
constexpr double kMaxStretch = 1.0;

SL2Matrix basepoint(BasepointFlow flow, double s) { return flow == BasepointFlow::Horocycle ? horocycle(s) : rotation(s); }

}  // namespace

double clamped_systole(const Triangulation& tr, Norm norm) {
  const double s = systole(tr, norm);
  if (s < kSystoleFloor) {
    ++g_clamps;
    return kSystoleFloor;
  }
  return s;
}

std::uint64_t systole_clamp_events() { return g_clamps.load(); }

ObservableF constant_observable(double c) {
  return {"constant", [c](const Triangulation&) { return c; }, 0.0, std::abs(c)};
}

// |sys(gx) - sys(x)| <= (||g||_op - 1) max(sys) and ||g - I||_op <= 2 d(g, id);
// the Euclidean systole of an area-one surface is below 1.08.
ObservableF systole_observable(Norm norm) {
  return {"min(1,systole)", [norm](const Triangulation& tr) { return std::min(1.0, clamped_systole(tr, norm)); }, 2.2, 1.0};
}

ObservableF bump_observable(double eps, Norm norm) {
  if (!(eps > 0)) fail(Errc::InvalidArgument, "bump threshold must be positive");
  return {"bump",
          [eps, norm](const Triangulation& tr) { return std::clamp((clamped_systole(tr, norm) - eps) / eps, 0.0, 1.0); },
          2.2 / eps, 1.0};
}

double sl2_distance(const SL2Matrix& g) {
  return std::max({std::abs(g.a() - 1), std::abs(g.b()), std::abs(g.c()), std::abs(g.d() - 1)});
}

double lipschitz_spot_check(const ObservableF& f, const TranslationSurface& x, Rng& rng, int pairs, double radius) {
  const Triangulation base = delaunay_triangulation(x);
  const double fx = f.eval(base);
  double worst = 0;
  for (int k = 0; k < pairs; ++k) {
    const double p = rng.uniform(-radius, radius), q = rng.uniform(-radius, radius), r = rng.uniform(-radius, radius);
    const SL2Matrix g(1 + p, q, r, (1 + q * r) / (1 + p));
    const double d = sl2_distance(g);
    if (d == 0) continue;
    Triangulation tr = base;
    act_in_place(g, tr);
    make_delaunay(tr);
    worst = std::max(worst, std::abs(f.eval(tr) - fx) / d);
  }
  return worst;
}

OrbitWalker::OrbitWalker(const Triangulation& base, const SL2Matrix& start) : tr_(base) {
  act_in_place(start, tr_);
  make_delaunay(tr_);
}

void OrbitWalker::advance(double dt) {
  double left = dt;
  while (left != 0) {
    const double step = std::clamp(left, -kMaxStretch, kMaxStretch);
    act_in_place(geodesic(step), tr_);
    make_delaunay(tr_);
    left -= step;
  }
  time_ += dt;
}

BirkhoffResult birkhoff_average_continuous(const TranslationSurface& x, double s, double T, const ObservableF& f, double dt) {
  if (!(T > 0)) fail(Errc::PreconditionViolated, "T must be positive");
  if (!(dt > 0 && dt <= T / 10)) fail(Errc::PreconditionViolated, "dt must lie in (0, T/10]");
  int n = static_cast<int>(std::ceil(T / dt - 1e-9));
  n += n % 2;
  const double h = T / n;
  OrbitWalker w(delaunay_triangulation(x), horocycle(s));
  double full = 0, half = 0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) w.advance(h);
    const double v = f.eval(w.state());
    const double wt = (k == 0 || k == n) ? 0.5 : 1.0;
    full += wt * v;
    if (k % 2 == 0) half += wt * v;
  }
  full *= h / T;
  half *= 2 * h / T;
  return {full, std::abs(full - half), n + 1};
}

double birkhoff_average_discrete(const TranslationSurface& x, double s, int N, double l, const ObservableF& f) {
  if (N < 1) fail(Errc::PreconditionViolated, "N must be >= 1");
  if (!(l > 0)) fail(Errc::PreconditionViolated, "step l must be positive");
  OrbitWalker w(delaunay_triangulation(x), horocycle(s));
  double acc = 0;
  for (int n = 1; n <= N; ++n) {
    w.advance(l);
    acc += f.eval(w.state());
  }
  return acc / N;
}

double DirectionGrid::width() const { return 2 * std::exp(-2.0 * level * step); }

std::int64_t DirectionGrid::count() const {
  const double q = 2 / width();
  if (!(q < 9e15)) fail(Errc::BudgetExceeded, "direction grid too fine");
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * q) return std::max<std::int64_t>(1, static_cast<std::int64_t>(r));
  return static_cast<std::int64_t>(std::ceil(q));
}

bool DirectionGrid::last_clipped() const {
  const auto [lo, hi] = interval(count() - 1);
  return hi - lo < width() * (1 - 1e-9);
}

std::pair<double, double> DirectionGrid::interval(std::int64_t k) const {
  const double w = width();
  const std::int64_t n = count();
  if (k < 0 || k >= n) fail(Errc::OutOfDomain, "grid index out of range");
  const double lo = -1 + static_cast<double>(k) * w;
  const double hi = k + 1 == n ? 1.0 : std::min(1.0, -1 + static_cast<double>(k + 1) * w);
  return {lo, hi};
}

double DirectionGrid::center(std::int64_t k) const {
  const auto [lo, hi] = interval(k);
  return 0.5 * (lo + hi);
}

std::int64_t DirectionGrid::index_of(double s) const {
  if (!(s >= -1 && s <= 1)) fail(Errc::OutOfDomain, "direction outside [-1, 1]");
  const std::int64_t n = count();
  auto k = static_cast<std::int64_t>(std::floor((s + 1) / width()));
  k = std::clamp<std::int64_t>(k, 0, n - 1);
  // settle floating-point edge cases against the stored endpoints
  while (k > 0 && s < interval(k).first) --k;
  while (k + 1 < n && s >= interval(k + 1).first) ++k;
  return k;
}

std::string mask_kind_name(MaskKind k) {
  switch (k) {
    case MaskKind::Z: return "Z";
    case MaskKind::B: return "B";
    case MaskKind::F: return "F";
    case MaskKind::R: return "R";
  }
  return "?";
}

bool BadSetMask::contains(std::int64_t k) const { return std::binary_search(bits.begin(), bits.end(), k); }

std::string BadSetMask::bitstring() const {
  const std::int64_t n = interval_count();
  if (n > (std::int64_t{1} << 24)) fail(Errc::BudgetExceeded, "mask too large for a bit-string export");
  std::string s(static_cast<std::size_t>(n), '0');
  for (auto k : bits) s[static_cast<std::size_t>(k)] = '1';
  return s;
}

IntervalSet to_intervals(const BadSetMask& m) {
  IntervalSet out;
  for (auto k : m.bits) {
    const auto iv = m.grid.interval(k);
    if (!out.empty() && out.back().second >= iv.first) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].first, b[j].first), hi = std::min(a[i].second, b[j].second);
    if (lo < hi) out.emplace_back(lo, hi);
    if (a[i].second < b[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

double measure(const IntervalSet& a) {
  double m = 0;
  for (const auto& [lo, hi] : a) m += hi - lo;
  return m;
}

std::vector<double> orbit_systoles(const TranslationSurface& x, double s, int N, double t, BasepointFlow flow, Norm norm) {
  OrbitWalker w(delaunay_triangulation(x), basepoint(flow, s));
  std::vector<double> out;
  for (int l = 1; l <= N; ++l) {
    w.advance(t);
    out.push_back(clamped_systole(w.state(), norm));
  }
  return out;
}

namespace {

struct MaskSearch {
  const Triangulation* base;
  const DirectionGrid* grid;
  const RecurrenceOptions* o;
  double need;  // a sample is bad when its count is below this
  std::atomic<std::int64_t>* nodes;
  std::atomic<std::int64_t>* marked;

  void mark(std::int64_t k0, std::int64_t k1, std::vector<std::int64_t>& out) const {
    if ((*marked += k1 - k0) > o->max_bits) fail(Errc::BudgetExceeded, "recurrence mask exceeds max_bits");
    for (std::int64_t k = k0; k < k1; ++k) out.push_back(k);
  }

  void solve(std::int64_t k0, std::int64_t k1, std::vector<std::int64_t>& out, std::int64_t& leaves) const {
    if (++*nodes > o->max_nodes) fail(Errc::BudgetExceeded, "recurrence mask exceeds max_nodes");
    const bool leaf = k1 - k0 == 1;
    const double lo = grid->interval(k0).first, hi = grid->interval(k1 - 1).second;
    const double c = 0.5 * (lo + hi), rho = leaf ? 0.0 : 0.5 * (hi - lo);
    OrbitWalker w(*base, basepoint(o->flow, c));
    int sure_in = 0, sure_out = 0;
    for (int l = 1; l <= o->N; ++l) {
      w.advance(o->t);
      const double sys = clamped_systole(w.state(), o->norm);
      const double spread = 1 + std::exp(2.0 * l * o->t) * rho;
      if (sys / spread >= o->eps) {
        ++sure_in;
      } else if (sys * spread < o->eps) {
        ++sure_out;
      }
      if (sure_in >= need) {
        if (leaf) ++leaves;
        return;
      }
      if (o->N - sure_out < need) {
        if (leaf) ++leaves;
        mark(k0, k1, out);
        return;
      }
    }
    if (leaf) fail(Errc::Internal, "leaf left undecided");
    const std::int64_t mid = k0 + (k1 - k0) / 2;
    solve(k0, mid, out, leaves);
    solve(mid, k1, out, leaves);
  }
};

}  // namespace

BadSetMask recurrence_mask(const TranslationSurface& x, const DirectionGrid& grid, const RecurrenceOptions& o, RecurrenceStats* stats) {
  if (!(o.delta >= 0 && o.delta <= 1)) fail(Errc::PreconditionViolated, "delta must lie in [0, 1]");
  if (o.N < 1) fail(Errc::InvalidArgument, "N must be >= 1");
  if (!(o.t > 0) || !(o.eps > 0)) fail(Errc::InvalidArgument, "t and eps must be positive");
  BadSetMask m{grid, MaskKind::Z, 0, {}};
  if (stats) *stats = {};
  if (o.delta == 0) return m;

  const Triangulation base = delaunay_triangulation(x);
  std::atomic<std::int64_t> nodes{0}, marked{0};
  const MaskSearch search{&base, &grid, &o, (1 - o.delta) * o.N - 1e-9 * o.N, &nodes, &marked};
  const std::int64_t n = grid.count();
  const std::int64_t chunks = std::min<std::int64_t>(n, 256);
  struct Part {
    std::vector<std::int64_t> bits;
    std::int64_t leaves = 0;
  };
  auto parts = parallel_map<Part>(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    Part p;
    const std::int64_t k0 = n * static_cast<std::int64_t>(c) / chunks, k1 = n * static_cast<std::int64_t>(c + 1) / chunks;
    if (k0 < k1) search.solve(k0, k1, p.bits, p.leaves);
    return p;
  });
  RecurrenceStats st;
  for (auto& p : parts) {
    m.bits.insert(m.bits.end(), p.bits.begin(), p.bits.end());
    st.leaves += p.leaves;
  }
  st.nodes = nodes.load();
  if (stats) *stats = st;
  return m;
}

namespace {

struct BlockWalk {
  std::vector<double> averages;       // f_i, i = 0..count-1
  std::vector<double> start_systole;  // systole at t = iN
};

BlockWalk walk_blocks(const Triangulation& base, double s, const ObservableF& f, double N, int count, double dt, Norm norm) {
  if (!(N > 0) || !(dt > 0)) fail(Errc::InvalidArgument, "block length and dt must be positive");
  int m = std::max(2, static_cast<int>(std::ceil(N / dt - 1e-9)));
  m += m % 2;
  const double h = N / m;
  OrbitWalker w(base, horocycle(s));
  BlockWalk out;
  double prev = f.eval(w.state());
  for (int i = 0; i < count; ++i) {
    out.start_systole.push_back(clamped_systole(w.state(), norm));
    double acc = 0.5 * prev;
    for (int k = 1; k <= m; ++k) {
      w.advance(h);
      const double v = f.eval(w.state());
      acc += k == m ? 0.5 * v : v;
      prev = v;
    }
    out.averages.push_back(acc * h / N);
  }
  return out;
}

}  // namespace

std::vector<double> block_averages(const TranslationSurface& x, double s, const ObservableF& f, double N, int count, double dt) {
  return walk_blocks(delaunay_triangulation(x), s, f, N, count, dt, Norm::Euclidean).averages;
}

namespace {

constexpr std::int64_t kDenseLimit = std::int64_t{1} << 22;

DirectionGrid dense_grid(int level, double N) {
  DirectionGrid g{level, N};
  if (g.count() > kDenseLimit) fail(Errc::BudgetExceeded, "grid level " + std::to_string(level) + " has too many intervals for dense evaluation");
  return g;
}

}  // namespace

std::vector<BadSetMask> deviation_masks(const TranslationSurface& x, const ObservableF& f, double reference_value, double beta,
                                        double N, int i_begin, int i_end, double dt) {
  if (i_begin < 0 || i_end < i_begin) fail(Errc::InvalidArgument, "bad level range");
  const Triangulation base = delaunay_triangulation(x);
  std::vector<BadSetMask> out;
  for (int i = i_begin; i < i_end; ++i) {
    const DirectionGrid g = dense_grid(i, N);
    const auto vals = parallel_map<double>(static_cast<std::size_t>(g.count()), [&](std::size_t k) {
      return walk_blocks(base, g.center(static_cast<std::int64_t>(k)), f, N, i + 1, dt, Norm::Euclidean).averages.back();
    });
    BadSetMask m{g, MaskKind::F, i, {}};
    for (std::size_t k = 0; k < vals.size(); ++k)
      if (vals[k] > reference_value + beta) m.bits.push_back(static_cast<std::int64_t>(k));
    out.push_back(std::move(m));
  }
  return out;
}

BadSetMask recurrent_mask(const TranslationSurface& x, int i, double N, double eps, Norm norm) {
  const Triangulation base = delaunay_triangulation(x);
  const DirectionGrid g = dense_grid(i, N);
  const auto in = parallel_map<char>(static_cast<std::size_t>(g.count()), [&](std::size_t k) {
    OrbitWalker w(base, horocycle(g.center(static_cast<std::int64_t>(k))));
    w.advance(i * N);
    return static_cast<char>(clamped_systole(w.state(), norm) >= eps);
  });
  BadSetMask m{g, MaskKind::R, i, {}};
  for (std::size_t k = 0; k < in.size(); ++k)
    if (in[k]) m.bits.push_back(static_cast<std::int64_t>(k));
  return m;
}

double zero_one_margin(const ObservableF& f, int i, int j, double N) { return f.sobolev() * std::exp(2.0 * (i + 1 - j) * N) / N; }

IndependenceReport independence_diagnostic(const std::vector<BadSetMask>& masks, const std::vector<BadSetMask>& recurrent,
                                           const std::vector<std::vector<int>>& tuples, double a) {
  if (!recurrent.empty() && recurrent.size() != masks.size()) fail(Errc::DimensionMismatch, "one recurrent mask per F mask");
  std::vector<IntervalSet> sets;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    IntervalSet s = to_intervals(masks[i]);
    if (!recurrent.empty()) s = intersect(s, to_intervals(recurrent[i]));
    sets.push_back(std::move(s));
  }
  IndependenceReport rep;
  std::size_t ok = 0;
  for (const auto& A : tuples) {
    if (A.empty()) fail(Errc::InvalidArgument, "empty index tuple");
    IntervalSet acc{{-1.0, 1.0}};
    for (int i : A) {
      if (i < 0 || i >= static_cast<int>(sets.size())) fail(Errc::OutOfDomain, "tuple index out of range");
      acc = intersect(acc, sets[static_cast<std::size_t>(i)]);
    }
    IndependenceRow row{A, measure(acc) / 2, std::pow(a, static_cast<double>(A.size())), true};
    row.ok = row.measure <= row.bound + 1e-15;
    ok += row.ok;
    rep.rows.push_back(std::move(row));
  }
  rep.fraction_ok = tuples.empty() ? 1.0 : static_cast<double>(ok) / static_cast<double>(tuples.size());
  return rep;
}

InclusionReport inclusion_check(const TranslationSurface& x, const ObservableF& f, const InclusionParams& p) {
  if (p.M < 1) fail(Errc::InvalidArgument, "M must be >= 1");
  const double delta = p.delta > 0 ? p.delta : p.eps / (4 * f.sobolev());
  if (delta > p.eps / (4 * f.sobolev()) * (1 + 1e-12)) fail(Errc::PreconditionViolated, "delta must not exceed eps / (4 S(f))");
  const Triangulation base = delaunay_triangulation(x);
  const DirectionGrid g = dense_grid(p.level, p.N);
  const int need = static_cast<int>(std::ceil(delta * p.M - 1e-12));
  struct Flags {
    char b = 0, z = 0, f = 0;
  };
  const auto flags = parallel_map<Flags>(static_cast<std::size_t>(g.count()), [&](std::size_t k) {
    const BlockWalk bw = walk_blocks(base, g.center(static_cast<std::int64_t>(k)), f, p.N, p.M, p.dt, p.norm);
    double avg = 0;
    int out = 0, hits = 0;
    for (int i = 0; i < p.M; ++i) {
      avg += bw.averages[static_cast<std::size_t>(i)];
      const bool in_q = bw.start_systole[static_cast<std::size_t>(i)] >= p.q_eps;
      out += !in_q;
      hits += in_q && bw.averages[static_cast<std::size_t>(i)] > p.reference_value + p.eps / 2;
    }
    avg /= p.M;
    return Flags{static_cast<char>(avg > p.reference_value + p.eps), static_cast<char>(static_cast<double>(out) / p.M > delta),
                 static_cast<char>(hits >= need)};
  });
  InclusionReport rep;
  rep.b_mask = {g, MaskKind::B, 0, {}};
  rep.z_mask = {g, MaskKind::Z, 0, {}};
  rep.f_mask = {g, MaskKind::F, 0, {}};
  rep.samples = g.count();
  for (std::size_t k = 0; k < flags.size(); ++k) {
    const auto idx = static_cast<std::int64_t>(k);
    if (flags[k].b) rep.b_mask.bits.push_back(idx);
    if (flags[k].z) rep.z_mask.bits.push_back(idx);
    if (flags[k].f) rep.f_mask.bits.push_back(idx);
    rep.violations += flags[k].b && !flags[k].z && !flags[k].f;
  }
  rep.b_bits = static_cast<std::int64_t>(rep.b_mask.count());
  rep.z_bits = static_cast<std::int64_t>(rep.z_mask.count());
  rep.f_bits = static_cast<std::int64_t>(rep.f_mask.count());
  return rep;
}

CorrelationReport correlation_decay_test(const TranslationSurface& x, const ObservableF& phi, double beta,
                                         const std::vector<std::pair<double, double>>& t_pairs, int quadrature_n, double rel_tol,
                                         double abs_floor) {
  if (t_pairs.empty()) fail(Errc::InvalidArgument, "no time pairs");
  std::set<double> ts;
  for (const auto& [a, b] : t_pairs) {
    if (!(a >= 0 && b >= 0)) fail(Errc::InvalidArgument, "times must be non-negative");
    ts.insert(a);
    ts.insert(b);
  }
  const std::vector<double> times(ts.begin(), ts.end());
  int n = quadrature_n ? quadrature_n : std::max(64, static_cast<int>(std::ceil(8 * std::exp(2 * times.back()))));
  if (n < 4) fail(Errc::InvalidArgument, "quadrature needs at least 4 nodes");
  // n divisible by 4: for integrands of period 1 in s (lattice surfaces) the
  // half rule then samples new residues instead of repeating the full rule
  n += (4 - n % 4) % 4;
  const Triangulation base = delaunay_triangulation(x);
  // column k holds f_t(s_k) for every t in `times`
  const auto cols = parallel_map<std::vector<double>>(static_cast<std::size_t>(n + 1), [&](std::size_t k) {
    const double s = -1 + 2.0 * static_cast<double>(k) / n;
    std::vector<double> col;
    for (double t : times) {
      Triangulation tr = base;
      act_in_place(geodesic(t) * horocycle(s), tr);
      make_delaunay(tr);
      const double u = phi.eval(tr);
      act_in_place(horocycle(beta), tr);
      make_delaunay(tr);
      col.push_back(u - phi.eval(tr));
    }
    return col;
  });
  auto index = [&](double t) { return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin()); };

  CorrelationReport rep;
  rep.nodes = n + 1;
  const double h = 2.0 / n;
  std::vector<double> gaps, logs;
  for (const auto& [t1, t2] : t_pairs) {
    const std::size_t i1 = index(t1), i2 = index(t2);
    double full = 0, half = 0;
    for (int k = 0; k <= n; ++k) {
      const double w = (k == 0 || k == n) ? 0.5 : 1.0;
      const double v = w * cols[static_cast<std::size_t>(k)][i1] * cols[static_cast<std::size_t>(k)][i2];
      full += v;
      if (k % 2 == 0) half += v;
    }
    full *= h;
    half *= 2 * h;
    const double err = std::abs(full - half);
    if (err > rel_tol * std::abs(full) + abs_floor) {
      fail(Errc::QuadratureUnstable, "correlation at (" + std::to_string(t1) + ", " + std::to_string(t2) + "): rule and half rule differ by " +
                                         std::to_string(err));
    }
    rep.points.push_back({t1, t2, std::abs(full), err, std::abs(full) > err});
    if (rep.points.back().resolved) {
      gaps.push_back(std::abs(t1 - t2));
      logs.push_back(std::log(std::abs(full)));
    }
  }
  std::set<double> distinct(gaps.begin(), gaps.end());
  if (distinct.size() >= 2) {
    const LinearFit fit = linear_fit(gaps, logs);
    rep.slope = fit.slope;
    rep.intercept = fit.intercept;
  }
  return rep;
}

}  // namespace teichlab
