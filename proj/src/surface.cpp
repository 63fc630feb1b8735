#include "teichlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "teichlab/error.hpp"

namespace teichlab {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double signed_area(const std::vector<Vec2>& poly) {
  double s = 0;
  for (std::size_t k = 0; k < poly.size(); ++k) s += cross(poly[k], poly[(k + 1) % poly.size()]);
  return 0.5 * s;
}

// Closed segments [a,b] and [c,d] meet (with a small absolute slack).
bool segments_meet(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double tol) {
  auto side = [&](Vec2 p, Vec2 q, Vec2 r) {
    const double v = cross(q - p, r - p);
    return std::abs(v) <= 1e-12 * std::abs(q - p) * std::abs(r - p) ? 0 : (v > 0 ? 1 : -1);
  };
  const int s1 = side(a, b, c), s2 = side(a, b, d), s3 = side(c, d, a), s4 = side(c, d, b);
  if (s1 * s2 < 0 && s3 * s4 < 0) return true;
  auto on = [&](Vec2 p, Vec2 q, Vec2 r) {
    return side(p, q, r) == 0 && std::min(p.real(), q.real()) - tol <= r.real() && r.real() <= std::max(p.real(), q.real()) + tol &&
           std::min(p.imag(), q.imag()) - tol <= r.imag() && r.imag() <= std::max(p.imag(), q.imag()) + tol;
  };
  return on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b);
}

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

TranslationSurface::TranslationSurface(std::vector<std::vector<Vec2>> polygons, std::vector<std::pair<EdgeRef, EdgeRef>> gluings)
    : polygons_(std::move(polygons)), gluings_(std::move(gluings)) {
  if (polygons_.empty()) fail(Errc::InvalidSurface, "surface has no polygons");
  std::size_t total = 0;
  for (const auto& poly : polygons_) {
    offset_.push_back(total);
    total += poly.size();
  }

  double scale = 0;
  for (std::size_t p = 0; p < polygons_.size(); ++p) {
    const auto& poly = polygons_[p];
    if (poly.size() < 3) fail(Errc::InvalidSurface, "polygon " + std::to_string(p) + " has fewer than 3 vertices");
    for (const auto& v : poly) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) fail(Errc::InvalidSurface, "non-finite vertex");
      scale = std::max(scale, max_norm(v));
    }
  }
  for (std::size_t p = 0; p < polygons_.size(); ++p) {
    const auto& poly = polygons_[p];
    const double a = signed_area(poly);
    if (!(a > 0)) fail(Errc::InvalidSurface, "polygon " + std::to_string(p) + " is not counterclockwise");
    area_ += a;
    const std::size_t n = poly.size();
    const double tol = 1e-12 * scale;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (j == i + 1 || (i == 0 && j == n - 1)) continue;
        if (segments_meet(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n], tol)) {
          fail(Errc::InvalidSurface, "polygon " + std::to_string(p) + " is not simple");
        }
      }
    }
  }

  partner_.assign(total, EdgeRef{-1, -1});
  auto flat = [&](EdgeRef e) -> std::size_t {
    if (e.polygon < 0 || e.polygon >= polygon_count() || e.edge < 0 ||
        e.edge >= static_cast<int>(polygons_[static_cast<std::size_t>(e.polygon)].size())) {
      fail(Errc::InvalidSurface, "gluing refers to a missing edge (" + std::to_string(e.polygon) + "," + std::to_string(e.edge) + ")");
    }
    return offset_[static_cast<std::size_t>(e.polygon)] + static_cast<std::size_t>(e.edge);
  };
  for (const auto& [e, f] : gluings_) {
    const std::size_t ie = flat(e), jf = flat(f);
    if (ie == jf) fail(Errc::InvalidSurface, "edge glued to itself");
    if (partner_[ie].polygon >= 0 || partner_[jf].polygon >= 0) fail(Errc::InvalidSurface, "edge glued more than once");
    partner_[ie] = f;
    partner_[jf] = e;
    const Vec2 ve = edge_vector(e.polygon, e.edge), vf = edge_vector(f.polygon, f.edge);
    if (std::abs(ve + vf) > 1e-9 * std::max(std::abs(ve), std::abs(vf))) {
      fail(Errc::InvalidSurface, "glued edges are not opposite translates (" + std::to_string(e.polygon) + "," + std::to_string(e.edge) + ")");
    }
  }
  for (std::size_t k = 0; k < total; ++k) {
    if (partner_[k].polygon < 0) fail(Errc::InvalidSurface, "unglued edge");
  }

  // v_e ~ v'_{e'+1} and v_{e+1} ~ v'_{e'}
  Dsu dsu(total);
  for (const auto& [e, f] : gluings_) {
    const auto ne = polygons_[static_cast<std::size_t>(e.polygon)].size(), nf = polygons_[static_cast<std::size_t>(f.polygon)].size();
    const int e0 = static_cast<int>(flat(e)), f0 = static_cast<int>(flat(f));
    const int e1 = static_cast<int>(offset_[static_cast<std::size_t>(e.polygon)] + (static_cast<std::size_t>(e.edge) + 1) % ne);
    const int f1 = static_cast<int>(offset_[static_cast<std::size_t>(f.polygon)] + (static_cast<std::size_t>(f.edge) + 1) % nf);
    dsu.unite(e0, f1);
    dsu.unite(e1, f0);
  }
  vertex_class_.assign(total, -1);
  std::vector<int> root_to_class(total, -1);
  for (std::size_t k = 0; k < total; ++k) {
    const int r = dsu.find(static_cast<int>(k));
    if (root_to_class[static_cast<std::size_t>(r)] < 0) root_to_class[static_cast<std::size_t>(r)] = class_count_++;
    vertex_class_[k] = root_to_class[static_cast<std::size_t>(r)];
  }

  std::vector<double> angle(static_cast<std::size_t>(class_count_), 0.0);
  for (std::size_t p = 0; p < polygons_.size(); ++p) {
    const auto& poly = polygons_[p];
    const std::size_t n = poly.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Vec2 next = poly[(k + 1) % n] - poly[k];
      const Vec2 prev = poly[(k + n - 1) % n] - poly[k];
      double a = std::atan2(cross(next, prev), dot(next, prev));
      if (a <= 0) a += kTwoPi;
      angle[static_cast<std::size_t>(vertex_class_[offset_[p] + k])] += a;
    }
  }
  int order_sum = 0;
  for (int c = 0; c < class_count_; ++c) {
    const double m = angle[static_cast<std::size_t>(c)] / kTwoPi;
    const long mi = std::lround(m);
    if (mi < 1 || std::abs(m - static_cast<double>(mi)) > 1e-6) {
      fail(Errc::InvalidSurface, "cone angle at vertex class " + std::to_string(c) + " is not a multiple of 2pi");
    }
    cone_points_.push_back({c, angle[static_cast<std::size_t>(c)], static_cast<int>(mi)});
    order_sum += static_cast<int>(mi) - 1;
  }
  if (order_sum % 2 != 0) fail(Errc::InvalidSurface, "Gauss-Bonnet: odd total order");
  genus_ = order_sum / 2 + 1;
  const int euler = class_count_ - static_cast<int>(gluings_.size()) + polygon_count();
  if (euler != 2 - 2 * genus_) fail(Errc::InvalidSurface, "Euler characteristic disagrees with Gauss-Bonnet");
}

Vec2 TranslationSurface::vertex(int p, int k) const {
  const auto& poly = polygon(p);
  const int n = static_cast<int>(poly.size());
  return poly[static_cast<std::size_t>(((k % n) + n) % n)];
}

Vec2 TranslationSurface::edge_vector(int p, int e) const { return vertex(p, e + 1) - vertex(p, e); }

EdgeRef TranslationSurface::partner(EdgeRef e) const { return partner_[offset_[static_cast<std::size_t>(e.polygon)] + static_cast<std::size_t>(e.edge)]; }

std::vector<int> TranslationSurface::stratum() const {
  std::vector<int> out;
  for (const auto& c : cone_points_) {
    if (c.order() > 0) out.push_back(c.order());
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

bool TranslationSurface::normalized() const noexcept { return std::abs(area_ - 1.0) <= 1e-9; }

TranslationSurface act(const SL2Matrix& m, const TranslationSurface& x) {
  TranslationSurface y = x;
  y.area_ = 0;
  std::vector<double> areas;
  for (auto& poly : y.polygons_) {
    for (auto& v : poly) v = m.apply(v);
    areas.push_back(signed_area(poly));
    y.area_ += areas.back();
  }
  for (double a : areas) {
    if (!(a > 1e-15 * y.area_)) fail(Errc::DegenerateGeometry, "polygon collapsed under the matrix action");
  }
  // det m = 1, so any visible change of area is lost precision
  if (!(std::abs(y.area_ - x.area_) <= 1e-9 * x.area_)) fail(Errc::DegenerateGeometry, "area not preserved to 1e-9 under the matrix action");
  return y;
}

TranslationSurface normalize_area(const TranslationSurface& x) {
  const double k = 1.0 / std::sqrt(x.area());
  auto polys = x.polygons();
  for (auto& poly : polys)
    for (auto& v : poly) v *= k;
  return TranslationSurface(std::move(polys), x.gluings());
}

TranslationSurface square_torus() {
  return TranslationSurface({{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}, {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}});
}

TranslationSurface lattice_torus(Vec2 u, Vec2 v) {
  if (cross(u, v) < 0) std::swap(u, v);
  if (!(cross(u, v) > 0)) fail(Errc::InvalidArgument, "lattice vectors are parallel");
  return normalize_area(TranslationSurface({{0, u, u + v, v}}, {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}}));
}

TranslationSurface regular_octagon() {
  std::vector<Vec2> poly;
  for (int k = 0; k < 8; ++k) poly.push_back(std::polar(1.0, -5 * std::numbers::pi / 8 + k * std::numbers::pi / 4));
  std::vector<std::pair<EdgeRef, EdgeRef>> glue;
  for (int k = 0; k < 4; ++k) glue.push_back({{0, k}, {0, k + 4}});
  return normalize_area(TranslationSurface({poly}, glue));
}

TranslationSurface double_pentagon() {
  std::vector<Vec2> p, q;
  for (int k = 0; k < 5; ++k) p.push_back(std::polar(1.0, -7 * std::numbers::pi / 10 + 2 * k * std::numbers::pi / 5));
  for (const auto& v : p) q.push_back(-v + Vec2(3, 0));
  std::vector<std::pair<EdgeRef, EdgeRef>> glue;
  for (int k = 0; k < 5; ++k) glue.push_back({{0, k}, {1, k}});
  return normalize_area(TranslationSurface({p, q}, glue));
}

std::vector<std::string> builtin_surface_names() { return {"square_torus", "regular_octagon", "double_pentagon"}; }

TranslationSurface builtin_surface(const std::string& name) {
  if (name == "square_torus") return square_torus();
  if (name == "regular_octagon") return regular_octagon();
  if (name == "double_pentagon") return double_pentagon();
  fail(Errc::InvalidArgument, "unknown built-in surface '" + name + "'");
}

}  // namespace teichlab
