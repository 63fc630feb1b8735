#include "teichlab/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <tuple>

#include "teichlab/error.hpp"

namespace teichlab {

namespace {

int nx(int k) { return k == 2 ? 0 : k + 1; }
int pv(int k) { return k == 0 ? 2 : k - 1; }

// Minimum norm over the segment a + s (b - a), s in [s0, s1].
double segment_min_norm(Vec2 a, Vec2 b, double s0, double s1, Norm norm) {
  const Vec2 d = b - a;
  if (norm == Norm::Euclidean) {
    const double dd = dot(d, d);
    double s = dd > 0 ? -dot(a, d) / dd : s0;
    s = std::clamp(s, s0, s1);
    return std::abs(a + s * d);
  }
  double best = std::min(max_norm(a + s0 * d), max_norm(a + s1 * d));
  auto probe = [&](double num, double den) {
    if (den == 0) return;
    const double s = num / den;
    if (s > s0 && s < s1) best = std::min(best, max_norm(a + s * d));
  };
  probe(-a.real(), d.real());                            // x = 0
  probe(-a.imag(), d.imag());                            // y = 0
  probe(a.imag() - a.real(), d.real() - d.imag());       // x = y
  probe(-(a.real() + a.imag()), d.real() + d.imag());    // x = -y
  return best;
}

// Parameter along a -> b where the ray from the origin in direction r meets the line.
double ray_param(Vec2 r, Vec2 a, Vec2 b, double fallback) {
  const double den = cross(r, b - a);
  if (den == 0) return fallback;
  return std::clamp(-cross(r, a) / den, 0.0, 1.0);
}

bool canonical(Vec2 w) {
  const double tol = 1e-12 * std::abs(w);
  return w.real() > tol || (std::abs(w.real()) <= tol && w.imag() > 0);
}

struct Node {
  int tri;      // triangle whose edge is crossed outward
  int edge;
  Vec2 offset;  // added to the triangle's coordinates
  Vec2 right;   // wedge from `right` counterclockwise to `left`, directions from p
  Vec2 left;
  int parent;
};

class Search {
 public:
  Search(const Triangulation& tr, double bound, Norm norm, std::size_t budget, bool shrink)
      : tr_(tr), bound_(bound), norm_(norm), budget_(budget), shrink_(shrink) {}

  void edges() {
    for (int t = 0; t < static_cast<int>(tr_.tris.size()); ++t) {
      const auto& T = tr_.tris[static_cast<std::size_t>(t)];
      for (int k = 0; k < 3; ++k) {
        const int u = T.nb_tri[static_cast<std::size_t>(k)], e = T.nb_edge[static_cast<std::size_t>(k)];
        if (std::make_pair(u, e) < std::make_pair(t, k)) continue;
        Vec2 w = T.v[static_cast<std::size_t>(nx(k))] - T.v[static_cast<std::size_t>(k)];
        int s = T.vclass[static_cast<std::size_t>(k)], f = T.vclass[static_cast<std::size_t>(nx(k))];
        if (!canonical(w)) {
          w = -w;
          std::swap(s, f);
        }
        record(w, s, f, -1, -1 - (3 * t + k));
      }
    }
  }

  void corners() {
    for (int t = 0; t < static_cast<int>(tr_.tris.size()); ++t) {
      const auto& T = tr_.tris[static_cast<std::size_t>(t)];
      for (int k = 0; k < 3; ++k) {
        const Vec2 p = T.v[static_cast<std::size_t>(k)];
        start_class_ = T.vclass[static_cast<std::size_t>(k)];
        start_corner_ = 3 * t + k;
        nodes_.clear();
        // shift so the cone point sits at the origin
        nodes_.push_back({t, nx(k), -p, T.v[static_cast<std::size_t>(nx(k))] - p, T.v[static_cast<std::size_t>(pv(k))] - p, -1});
        for (std::size_t i = 0; i < nodes_.size(); ++i) expand(i);
      }
    }
  }

  std::vector<SaddleConnection> take() {
    std::vector<SaddleConnection> out;
    out.reserve(found_.size());
    for (auto& [key, sc] : found_) {
      if (norm_of(sc.holonomy, norm_) <= bound_ * (1 + 1e-9)) out.push_back(std::move(sc));
    }
    std::sort(out.begin(), out.end(), [&](const SaddleConnection& a, const SaddleConnection& b) {
      const double na = norm_of(a.holonomy, norm_), nb = norm_of(b.holonomy, norm_);
      if (std::abs(na - nb) > 1e-12 * std::max(na, nb)) return na < nb;
      const double aa = std::arg(a.holonomy), ab = std::arg(b.holonomy);
      if (std::abs(aa - ab) > 1e-12) return aa < ab;
      return std::tie(a.start_class, a.end_class, a.crossings) < std::tie(b.start_class, b.end_class, b.crossings);
    });
    return out;
  }

  double best() const { return best_; }

 private:
  void record(Vec2 w, int s, int f, int node, int corner) {
    w += Vec2(0.0, 0.0);  // no negative zeros in output
    const double n = norm_of(w, norm_);
    if (n > bound_ * (1 + 1e-9)) return;
    best_ = std::min(best_, n);
    if (shrink_) bound_ = std::min(bound_, n);
    const double q = 1e9;
    auto key = std::make_tuple(std::llround(w.real() * q), std::llround(w.imag() * q), s, f, corner);
    if (found_.count(key)) return;
    SaddleConnection sc{w, s, f, {}};
    for (int i = node; i >= 0; i = nodes_[static_cast<std::size_t>(i)].parent) {
      sc.crossings.push_back(3 * nodes_[static_cast<std::size_t>(i)].tri + nodes_[static_cast<std::size_t>(i)].edge);
    }
    std::reverse(sc.crossings.begin(), sc.crossings.end());
    found_.emplace(key, std::move(sc));
  }

  void expand(std::size_t i) {
    if (++visited_ > budget_) {
      fail(Errc::BudgetExceeded, "saddle connection search exceeded " + std::to_string(budget_) + " nodes");
    }
    const Node n = nodes_[i];
    const auto& T = tr_.tris[static_cast<std::size_t>(n.tri)];
    // crossing edge n.edge outward: its right endpoint (seen from p) is v[edge]
    const Vec2 ra = T.v[static_cast<std::size_t>(n.edge)] + n.offset;
    const Vec2 lb = T.v[static_cast<std::size_t>(nx(n.edge))] + n.offset;
    const double s0 = ray_param(n.right, ra, lb, 0.0), s1 = ray_param(n.left, ra, lb, 1.0);
    if (segment_min_norm(ra, lb, std::min(s0, s1), std::max(s0, s1), norm_) > bound_ * (1 + 1e-9)) return;

    const int u = T.nb_tri[static_cast<std::size_t>(n.edge)], e = T.nb_edge[static_cast<std::size_t>(n.edge)];
    const auto& U = tr_.tris[static_cast<std::size_t>(u)];
    const Vec2 off = ra - U.v[static_cast<std::size_t>(nx(e))];
    const Vec2 c = U.v[static_cast<std::size_t>(pv(e))] + off;

    const double tol_r = 1e-12 * std::abs(n.right) * std::abs(c), tol_l = 1e-12 * std::abs(n.left) * std::abs(c);
    const double cr = cross(n.right, c), cl = cross(c, n.left);
    const int self = static_cast<int>(i);
    if (cr > tol_r && cl > tol_l) {
      if (canonical(c)) record(c, start_class_, U.vclass[static_cast<std::size_t>(pv(e))], self, start_corner_);
      nodes_.push_back({u, nx(e), off, n.right, c, self});
      nodes_.push_back({u, pv(e), off, c, n.left, self});
    } else if (cr <= tol_r) {
      nodes_.push_back({u, pv(e), off, n.right, n.left, self});
    } else {
      nodes_.push_back({u, nx(e), off, n.right, n.left, self});
    }
  }

  const Triangulation& tr_;
  double bound_;
  Norm norm_;
  std::size_t budget_;
  bool shrink_;
  std::size_t visited_ = 0;
  double best_ = INFINITY;
  int start_class_ = 0;
  int start_corner_ = 0;
  std::vector<Node> nodes_;
  std::map<std::tuple<long long, long long, int, int, int>, SaddleConnection> found_;
};

}  // namespace

double norm_of(Vec2 v, Norm n) noexcept { return n == Norm::Max ? max_norm(v) : std::abs(v); }

std::size_t default_node_budget() {
  if (const char* env = std::getenv("TEICH_LAB_BUDGET")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1'000'000;
}

std::vector<SaddleConnection> saddle_connections(const Triangulation& tr, double bound, const SaddleOptions& opt) {
  if (!(bound > 0) || !std::isfinite(bound)) fail(Errc::InvalidArgument, "saddle connection bound must be positive and finite");
  Search s(tr, bound, opt.norm, opt.node_budget ? opt.node_budget : default_node_budget(), false);
  s.edges();
  s.corners();
  return s.take();
}

std::vector<SaddleConnection> saddle_connections(const TranslationSurface& x, double bound, const SaddleOptions& opt) {
  return saddle_connections(delaunay_triangulation(x), bound, opt);
}

double systole(const Triangulation& tr, Norm norm, std::size_t node_budget) {
  double bound = INFINITY;
  for (const auto& T : tr.tris)
    for (int k = 0; k < 3; ++k) bound = std::min(bound, norm_of(T.v[static_cast<std::size_t>(nx(k))] - T.v[static_cast<std::size_t>(k)], norm));
  Search s(tr, bound, norm, node_budget ? node_budget : default_node_budget(), true);
  s.edges();
  s.corners();
  return s.best();
}

double systole(const TranslationSurface& x, Norm norm, std::size_t node_budget) {
  return systole(delaunay_triangulation(x), norm, node_budget);
}

bool in_compact_set(const TranslationSurface& x, double eps, Norm norm) { return systole(x, norm) >= eps; }

}  // namespace teichlab
