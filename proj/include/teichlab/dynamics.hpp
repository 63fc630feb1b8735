#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "teichlab/rng.hpp"
#include "teichlab/saddle.hpp"
#include "teichlab/sl2.hpp"
#include "teichlab/surface.hpp"
#include "teichlab/triangulation.hpp"

namespace teichlab {

// Systoles below this are clamped; each clamp is counted process-wide.
inline constexpr double kSystoleFloor = 1e-8;
double clamped_systole(const Triangulation& delaunay_tr, Norm norm);
std::uint64_t systole_clamp_events();

// Observable on surfaces, evaluated on a Delaunay triangulation. lip is
// relative to d(g, id) = max |entry of g - I|.
struct ObservableF {
  std::string name;
  std::function<double(const Triangulation&)> eval;
  double lip = 0;
  double sup = 0;
  double sobolev() const { return lip + sup; }
};

ObservableF constant_observable(double c);
// min(1, systole)
ObservableF systole_observable(Norm norm = Norm::Euclidean);
// clamp((systole - eps) / eps, 0, 1): Lipschitz, vanishes off K_eps.
ObservableF bump_observable(double eps, Norm norm = Norm::Euclidean);

double sl2_distance(const SL2Matrix& g);

// max |f(gx) - f(x)| / d(g, id) over random g with d(g, id) <= radius.
double lipschitz_spot_check(const ObservableF& f, const TranslationSurface& x, Rng& rng, int pairs, double radius = 0.05);

// Follows t -> g_t m x by stretching the current Delaunay triangulation and
// flipping back to Delaunay after every step. Each step is well conditioned,
// unlike applying g_T m in one go for large T.
class OrbitWalker {
 public:
  OrbitWalker(const Triangulation& delaunay_base, const SL2Matrix& start);
  void advance(double dt);
  const Triangulation& state() const noexcept { return tr_; }
  double time() const noexcept { return time_; }

 private:
  Triangulation tr_;
  double time_ = 0;
};

struct BirkhoffResult {
  double value = 0;
  double quadrature_error = 0;  // |rule - rule on every other node|
  int nodes = 0;
};

// (1/T) int_0^T f(g_t h_s x) dt by the trapezoid rule with step <= dt.
BirkhoffResult birkhoff_average_continuous(const TranslationSurface& x, double s, double T, const ObservableF& f, double dt);
// (1/N) sum_{n=1}^N f(g_{ln} h_s x)
double birkhoff_average_discrete(const TranslationSurface& x, double s, int N, double l, const ObservableF& f);

// Partition of [-1, 1] into half-open intervals of width 2 e^{-2 level step},
// left to right from -1; the last one is clipped at 1.
struct DirectionGrid {
  int level = 0;
  double step = 1;

  double width() const;
  double radius() const { return width() / 2; }
  std::int64_t count() const;
  bool last_clipped() const;
  std::pair<double, double> interval(std::int64_t k) const;
  double center(std::int64_t k) const;
  std::int64_t index_of(double s) const;
};

enum class MaskKind { Z, B, F, R };
std::string mask_kind_name(MaskKind k);

// Sparse: sorted indices of the bad intervals of `grid`.
struct BadSetMask {
  DirectionGrid grid;
  MaskKind kind = MaskKind::Z;
  int index = 0;  // i for F_i and R_i masks
  std::vector<std::int64_t> bits;

  std::int64_t interval_count() const { return grid.count(); }
  std::size_t count() const { return bits.size(); }
  bool contains(std::int64_t k) const;
  // One character per interval; only for grids of at most 1 << 24 intervals.
  std::string bitstring() const;
};

// Union of the marked intervals as disjoint sorted [lo, hi) pieces.
using IntervalSet = std::vector<std::pair<double, double>>;
IntervalSet to_intervals(const BadSetMask& m);
IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);
double measure(const IntervalSet& a);

enum class BasepointFlow { Horocycle, Rotation };

struct RecurrenceOptions {
  double eps = 0.1;  // K_eps = {systole >= eps}
  int N = 1;
  double t = 1;
  double delta = 0.5;
  BasepointFlow flow = BasepointFlow::Horocycle;
  Norm norm = Norm::Euclidean;
  std::int64_t max_nodes = 50'000'000;
  std::int64_t max_bits = 50'000'000;
};

struct RecurrenceStats {
  std::int64_t nodes = 0;
  std::int64_t leaves = 0;
};

// systole(g_{lt} b x) for l = 1..N, with b = h_s or r_s.
std::vector<double> orbit_systoles(const TranslationSurface& x, double s, int N, double t, BasepointFlow flow,
                                   Norm norm = Norm::Euclidean);

// Z-set mask: interval J is bad when at its center
//   (1/N) #{1 <= l <= N : g_{lt} b_s x in K_eps} < 1 - delta.
// delta = 0 marks nothing. Intervals are resolved by branch and bound: on a
// node of radius r around c, systole(g_{lt} b_s x) stays within a factor
// 1 + e^{2lt} r of its value at c, which often settles a whole node at once.
BadSetMask recurrence_mask(const TranslationSurface& x, const DirectionGrid& grid, const RecurrenceOptions& o,
                           RecurrenceStats* stats = nullptr);

// f_i(s) = (1/N) int_{iN}^{(i+1)N} f(g_t h_s x) dt for i = 0..count-1, one walk.
std::vector<double> block_averages(const TranslationSurface& x, double s, const ObservableF& f, double N, int count, double dt);

// F_i(beta) masks on P_i (grid level i, step N) for i in [i_begin, i_end).
// reference_value stands in for nu_M(f) and is supplied by the caller.
std::vector<BadSetMask> deviation_masks(const TranslationSurface& x, const ObservableF& f, double reference_value, double beta,
                                        double N, int i_begin, int i_end, double dt = 0.05);

// R_i: intervals of P_i whose center satisfies g_{iN} h_c x in K_eps.
BadSetMask recurrent_mask(const TranslationSurface& x, int i, double N, double eps, Norm norm = Norm::Euclidean);

// Zero-one law margin: if J in P_j (j > i) meets F_i(beta), then J lies in
// F_i(beta - S(f) e^{2(i+1-j)N} / N).
double zero_one_margin(const ObservableF& f, int i, int j, double N);

struct IndependenceRow {
  std::vector<int> tuple;
  double measure = 0;  // normalized Lebesgue measure of the intersection
  double bound = 0;    // a^{|A|}
  bool ok = true;
};

struct IndependenceReport {
  std::vector<IndependenceRow> rows;
  double fraction_ok = 1;
};

// masks[i] is intersected with recurrent[i] when recurrent is non-empty.
IndependenceReport independence_diagnostic(const std::vector<BadSetMask>& masks, const std::vector<BadSetMask>& recurrent,
                                           const std::vector<std::vector<int>>& tuples, double a);

struct InclusionReport {
  std::int64_t samples = 0;
  std::int64_t b_bits = 0;
  std::int64_t z_bits = 0;
  std::int64_t f_bits = 0;      // samples with at least ceil(delta M) recurrent F_i(eps/2) hits
  std::int64_t violations = 0;  // B bits in neither
  BadSetMask b_mask, z_mask, f_mask;
};

struct InclusionParams {
  double reference_value = 0;
  double eps = 0.1;      // deviation threshold
  double q_eps = 0.1;    // K_{q_eps} plays the role of Q
  double N = 1;
  int M = 4;
  double delta = 0;      // 0 picks eps / (4 S(f))
  int level = 4;         // grid of sample centers, step N
  double dt = 0.05;
  Norm norm = Norm::Euclidean;
};

// B(f, N, eps, M) against Z(Q, M, N, delta) and the F^R_i(eps/2) tuples, all
// evaluated at the centers of one grid. For delta <= eps / (4 S(f)) every B
// sample lies in one of the other two, so violations should be 0.
InclusionReport inclusion_check(const TranslationSurface& x, const ObservableF& f, const InclusionParams& p);

struct CorrelationPoint {
  double t1 = 0, t2 = 0;
  double value = 0;  // |int_{-1}^1 f_{t1} f_{t2} ds|
  double quadrature_error = 0;
  bool resolved = true;  // value exceeds quadrature_error; only these enter the fit
};

struct CorrelationReport {
  std::vector<CorrelationPoint> points;
  double slope = 0;      // of log value against |t1 - t2|
  double intercept = 0;
  int nodes = 0;
};

// f_t(s) = phi(g_t h_s x) - phi(h_beta g_t h_s x). quadrature_n = 0 picks
// max(64, 8 e^{2 max t}). Throws QuadratureUnstable when the rule and the
// half rule disagree by more than rel_tol of the value plus abs_floor.
CorrelationReport correlation_decay_test(const TranslationSurface& x, const ObservableF& phi, double beta,
                                         const std::vector<std::pair<double, double>>& t_pairs, int quadrature_n = 0,
                                         double rel_tol = 0.25, double abs_floor = 1e-4);

}  // namespace teichlab
