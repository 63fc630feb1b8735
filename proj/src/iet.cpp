#include "teichlab/iet.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "teichlab/error.hpp"

namespace teichlab {

Iet::Iet(std::vector<Rational> lengths, Permutation perm) : lengths_(std::move(lengths)), perm_(std::move(perm)) {
  const int d = perm_.size();
  if (d < 2) fail(Errc::InvalidArgument, "an IET needs at least two intervals");
  if (static_cast<int>(lengths_.size()) != d) {
    fail(Errc::DimensionMismatch, "got " + std::to_string(lengths_.size()) + " lengths for a permutation on " +
                                      std::to_string(d) + " letters");
  }
  for (auto& l : lengths_) {
    l.canonicalize();
    if (sgn(l) <= 0) fail(Errc::InvalidArgument, "IET lengths must be positive");
  }
  if (!is_irreducible(perm_)) fail(Errc::NotIrreducible, "IET permutation must be irreducible: " + perm_.to_string());

  betas_.assign(static_cast<std::size_t>(d + 1), Rational(0));
  for (int i = 1; i <= d; ++i) betas_[static_cast<std::size_t>(i)] = betas_[static_cast<std::size_t>(i - 1)] + length(i);

  // Image slots in order: slot k holds letter pi^{-1}(k).
  image_slot_starts_.assign(static_cast<std::size_t>(d + 1), Rational(0));
  for (int k = 1; k <= d; ++k) {
    image_slot_starts_[static_cast<std::size_t>(k)] = image_slot_starts_[static_cast<std::size_t>(k - 1)] + length(perm_.inverse(k));
  }
  image_starts_.resize(static_cast<std::size_t>(d));
  translations_.resize(static_cast<std::size_t>(d));
  for (int i = 1; i <= d; ++i) {
    image_starts_[static_cast<std::size_t>(i - 1)] = image_slot_starts_[static_cast<std::size_t>(perm_(i) - 1)];
    translations_[static_cast<std::size_t>(i - 1)] = image_starts_[static_cast<std::size_t>(i - 1)] - betas_[static_cast<std::size_t>(i - 1)];
  }
}

int Iet::interval_of(const Rational& x) const {
  if (sgn(x) < 0 || x >= total()) fail(Errc::OutOfDomain, "point " + to_string(x) + " outside [0, " + to_string(total()) + ")");
  // first beta strictly greater than x
  auto it = std::upper_bound(betas_.begin(), betas_.end(), x);
  return static_cast<int>(it - betas_.begin());
}

Rational evaluate(const Iet& t, const Rational& x) { return x + t.translation(t.interval_of(x)); }

Rational evaluate_inverse(const Iet& t, const Rational& y) {
  if (sgn(y) < 0 || y >= t.total()) fail(Errc::OutOfDomain, "point " + to_string(y) + " outside [0, " + to_string(t.total()) + ")");
  // Find the image slot containing y, then undo that letter's translation.
  int lo = 1, hi = t.size();
  // slot starts are increasing in the slot index k; letter in slot k is pi^{-1}(k)
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (t.image_start(t.perm().inverse(mid)) <= y) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  const int letter = t.perm().inverse(lo);
  return y - t.translation(letter);
}

PartitionSweep::PartitionSweep(const Iet& t) : iet_(&t) {
  const int d = t.size();
  depth_ = 1;
  epsilon_ = t.total();
  insert(Rational(0), 0, 0);
  for (int i = 1; i < d; ++i) {
    frontier_.push_back(t.betas()[static_cast<std::size_t>(i)]);
    insert(frontier_.back(), i, 0);
  }
}

void PartitionSweep::insert(const Rational& p, int orbit, int step) {
  auto [it, inserted] = points_.try_emplace(p, orbit, step);
  if (!inserted) {
    if (!collision_) collision_ = Collision{step, orbit, it->second.first, it->second.second, p};
    epsilon_ = 0;
    return;
  }
  if (collision_) return;
  // Splitting a gap only produces smaller gaps, so the running minimum is exact.
  const Rational& right = std::next(it) == points_.end() ? iet_->total() : std::next(it)->first;
  Rational gap = right - p;
  if (gap < epsilon_) epsilon_ = gap;
  if (it != points_.begin()) {
    gap = p - std::prev(it)->first;
    if (gap < epsilon_) epsilon_ = gap;
  }
}

void PartitionSweep::advance() {
  for (std::size_t k = 0; k < frontier_.size(); ++k) {
    frontier_[k] = evaluate_inverse(*iet_, frontier_[k]);
    insert(frontier_[k], static_cast<int>(k) + 1, depth_);
  }
  ++depth_;
}

PartitionReport PartitionSweep::report() const {
  PartitionReport r;
  r.n = depth_;
  r.cut_points.reserve(points_.size());
  for (const auto& [p, owner] : points_) r.cut_points.push_back(p);
  r.epsilon_n = epsilon_;
  r.n_epsilon_n = epsilon_ * depth_;
  r.collision = collision_;
  return r;
}

PartitionReport partition_report(const Iet& t, int n) {
  if (n < 1) fail(Errc::InvalidArgument, "partition depth must be >= 1");
  PartitionSweep sweep(t);
  while (sweep.depth() < n) sweep.advance();
  return sweep.report();
}

std::vector<Rational> epsilon_sequence(const Iet& t, int n_max) {
  if (n_max < 1) fail(Errc::InvalidArgument, "n_max must be >= 1");
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(n_max));
  PartitionSweep sweep(t);
  out.push_back(sweep.epsilon());
  while (sweep.depth() < n_max) {
    sweep.advance();
    out.push_back(sweep.epsilon());
  }
  return out;
}

IdocVerdict check_idoc(const Iet& t, int depth) {
  if (depth < 1) fail(Errc::InvalidArgument, "IDOC depth must be >= 1");
  IdocVerdict v;
  std::map<Rational, std::pair<int, int>> seen;
  std::vector<Rational> cur;
  for (int i = 1; i < t.size(); ++i) {
    cur.push_back(t.betas()[static_cast<std::size_t>(i)]);
    seen.emplace(cur.back(), std::make_pair(i, 0));
  }
  for (int k = 1; k <= depth; ++k) {
    for (int i = 1; i < t.size(); ++i) {
      auto& x = cur[static_cast<std::size_t>(i - 1)];
      x = evaluate(t, x);
      auto [it, inserted] = seen.try_emplace(x, i, k);
      if (!inserted) {
        v.depth_checked = k;
        v.collision = Collision{k, i, it->second.first, it->second.second, x};
        return v;
      }
    }
  }
  v.depth_checked = depth;
  return v;
}

std::vector<NEpsSample> short_intervals_diagnostic(const Iet& t, int n_max, Schedule schedule, int points) {
  if (n_max < 1) fail(Errc::InvalidArgument, "n_max must be >= 1");
  if (points < 1) fail(Errc::InvalidArgument, "schedule needs at least one point");
  std::vector<int> ns;
  for (int k = 1; k <= points; ++k) {
    int n;
    if (schedule == Schedule::Linear) {
      n = static_cast<int>((static_cast<long long>(k) * n_max + points - 1) / points);
    } else {
      n = points == 1 ? n_max
                      : static_cast<int>(std::lround(std::pow(static_cast<double>(n_max), static_cast<double>(k - 1) / (points - 1))));
    }
    n = std::clamp(n, 1, n_max);
    if (ns.empty() || n > ns.back()) ns.push_back(n);
  }
  if (ns.back() != n_max) ns.push_back(n_max);

  std::vector<NEpsSample> out;
  PartitionSweep sweep(t);
  for (int n : ns) {
    while (sweep.depth() < n) sweep.advance();
    out.push_back({n, sweep.epsilon() * n});
  }
  return out;
}

std::string to_string(WeakMixingStatus s) {
  switch (s) {
    case WeakMixingStatus::WeakMixingCertified: return "WeakMixingCertified";
    case WeakMixingStatus::Inconclusive: return "Inconclusive";
    case WeakMixingStatus::CriterionFailsNumerically: return "CriterionFailsNumerically";
  }
  return "?";
}

WeakMixingVerdict weak_mixing_verdict(const Iet& t, int depth, int n_max, const Rational& threshold) {
  if (depth < 1 || n_max < 1) fail(Errc::InvalidArgument, "depth and n_max must be >= 1");
  const TypeWResult tw = classify_type_w(t.perm());
  if (!tw.type_w) fail(Errc::NotTypeW, "permutation " + t.perm().to_string() + " is not of type W");

  WeakMixingVerdict out;
  auto& ev = out.evidence;
  ev.type_w_trace = tw.trace;
  ev.threshold = threshold;
  ev.idoc = check_idoc(t, depth);
  ev.tail_begin = (n_max + 1) / 2;
  ev.tail_end = n_max;
  ev.tail_max_n_eps = 0;

  PartitionSweep sweep(t);
  for (;;) {
    if (sweep.depth() >= ev.tail_begin) {
      Rational v = sweep.epsilon() * sweep.depth();
      if (ev.tail_argmax == 0 || v > ev.tail_max_n_eps) {
        ev.tail_max_n_eps = v;
        ev.tail_argmax = sweep.depth();
      }
    }
    if (sweep.depth() >= n_max) break;
    sweep.advance();
  }

  if (!ev.idoc.no_collision()) {
    out.status = WeakMixingStatus::CriterionFailsNumerically;
  } else if (ev.tail_max_n_eps >= threshold) {
    out.status = WeakMixingStatus::WeakMixingCertified;
  } else {
    out.status = WeakMixingStatus::Inconclusive;
  }
  return out;
}

}  // namespace teichlab
