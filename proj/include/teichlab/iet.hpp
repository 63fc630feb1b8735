#pragma once

#include <optional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "teichlab/permutation.hpp"
#include "teichlab/rational.hpp"

namespace teichlab {

// Interval exchange T_{lambda,pi} on [0, |lambda|) with exact rational lengths.
// I_i = [beta_{i-1}, beta_i) is translated onto the pi(i)-th slot of the image.
class Iet {
 public:
  // Requires d >= 2, every length > 0 and pi irreducible.
  Iet(std::vector<Rational> lengths, Permutation perm);

  int size() const noexcept { return perm_.size(); }
  const Permutation& perm() const noexcept { return perm_; }
  std::span<const Rational> lengths() const noexcept { return lengths_; }
  const Rational& length(int i) const { return lengths_[static_cast<std::size_t>(i - 1)]; }
  const Rational& total() const noexcept { return betas_.back(); }
  // beta_0 = 0, ..., beta_d = |lambda|
  std::span<const Rational> betas() const noexcept { return betas_; }
  // Left endpoint of the slot pi(i) occupies in the image, i.e. T(beta_{i-1}).
  const Rational& image_start(int i) const { return image_starts_[static_cast<std::size_t>(i - 1)]; }
  // T(x) - x on I_i.
  const Rational& translation(int i) const { return translations_[static_cast<std::size_t>(i - 1)]; }

  // Index i with x in I_i. Throws OutOfDomain outside [0, |lambda|).
  int interval_of(const Rational& x) const;

 private:
  std::vector<Rational> lengths_;
  Permutation perm_;
  std::vector<Rational> betas_;
  std::vector<Rational> image_starts_;
  std::vector<Rational> translations_;
  // image slot boundaries, sorted: slot k (1-based) starts at image_slot_starts_[k-1]
  std::vector<Rational> image_slot_starts_;
};

Rational evaluate(const Iet& t, const Rational& x);
Rational evaluate_inverse(const Iet& t, const Rational& y);

// Two orbit points that coincide exactly. Orbit index 0 stands for the base
// point beta_0 = 0; orbits 1..d-1 are those of beta_1..beta_{d-1}.
struct Collision {
  int k = 0;        // step at which the repeated point was produced
  int i = 0;        // orbit that produced it
  int j = 0;        // orbit that already owned the point
  int k_other = 0;  // step at which orbit j produced it
  Rational point;
};

struct PartitionReport {
  int n = 0;
  std::vector<Rational> cut_points;  // D_n, sorted, in [0, |lambda|)
  Rational epsilon_n;                // 0 when cut points coincide
  Rational n_epsilon_n;
  std::optional<Collision> collision;
};

// Incremental construction of D_1 \subset D_2 \subset ...
// D_n = {0} u { T^{-k}(beta_i) : 1 <= i < d, 0 <= k < n }; the backward orbit
// of beta_0 merges into one of these after one step, so it adds nothing.
// Gaps are measured on [0, |lambda|) with |lambda| as the final endpoint. A
// coincidence between generated points is a collision and pins epsilon_n to 0.
class PartitionSweep {
 public:
  explicit PartitionSweep(const Iet& t);

  int depth() const noexcept { return depth_; }
  const Rational& epsilon() const noexcept { return epsilon_; }
  const std::optional<Collision>& collision() const noexcept { return collision_; }
  std::size_t cut_count() const noexcept { return points_.size(); }

  // depth -> depth + 1
  void advance();
  PartitionReport report() const;

 private:
  void insert(const Rational& p, int orbit, int step);

  const Iet* iet_;
  int depth_ = 0;
  std::vector<Rational> frontier_;  // T^{-(depth-1)}(beta_i), i = 1..d-1
  std::map<Rational, std::pair<int, int>> points_;  // point -> (orbit, step)
  Rational epsilon_;
  std::optional<Collision> collision_;
};

PartitionReport partition_report(const Iet& t, int n);

// epsilon_1, ..., epsilon_{n_max}
std::vector<Rational> epsilon_sequence(const Iet& t, int n_max);

struct IdocVerdict {
  int depth_checked = 0;
  std::optional<Collision> collision;  // empty: no collision up to depth
  bool no_collision() const noexcept { return !collision.has_value(); }
};

// Forward orbits of beta_1..beta_{d-1} up to `depth` steps, compared exactly.
IdocVerdict check_idoc(const Iet& t, int depth);

enum class Schedule { Linear, Geometric };

struct NEpsSample {
  int n = 0;
  Rational n_epsilon_n;
};

// n * epsilon_n sampled at `points` values of n in [1, n_max] (linear or
// geometric spacing; n_max is always included).
std::vector<NEpsSample> short_intervals_diagnostic(const Iet& t, int n_max, Schedule schedule, int points = 64);

enum class WeakMixingStatus { WeakMixingCertified, Inconclusive, CriterionFailsNumerically };

std::string to_string(WeakMixingStatus s);

struct WeakMixingEvidence {
  std::vector<int> type_w_trace;
  IdocVerdict idoc;
  int tail_begin = 0;  // tail window [tail_begin, n_max]
  int tail_end = 0;
  Rational tail_max_n_eps;
  int tail_argmax = 0;
  Rational threshold;
  // IDOC is only checked to a finite depth and ergodicity is never checked.
  bool idoc_is_finite_check = true;
  bool ergodicity_verified = false;
};

struct WeakMixingVerdict {
  WeakMixingStatus status = WeakMixingStatus::Inconclusive;
  WeakMixingEvidence evidence;
};

// Certifies only when pi is type W, no orbit collision occurs up to `depth`,
// and max n*epsilon_n over n in [ceil(n_max/2), n_max] reaches `threshold`.
// Throws NotTypeW when pi is not of type W. Never returns a negative verdict.
WeakMixingVerdict weak_mixing_verdict(const Iet& t, int depth, int n_max, const Rational& threshold);

}  // namespace teichlab
