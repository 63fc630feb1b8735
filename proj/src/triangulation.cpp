#include "teichlab/triangulation.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "teichlab/error.hpp"

namespace teichlab {

namespace {

int nx(int k) { return k == 2 ? 0 : k + 1; }
int pv(int k) { return k == 0 ? 2 : k - 1; }

double angle_at(Vec2 apex, Vec2 p, Vec2 q) {
  const Vec2 u = p - apex, w = q - apex;
  return std::atan2(std::abs(cross(u, w)), dot(u, w));
}

// Closed triangle test with a tolerance relative to the edge and offset lengths.
bool inside_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  auto left_of = [&](Vec2 u, Vec2 w) { return cross(w - u, p - u) >= -1e-12 * std::abs(w - u) * std::abs(p - u); };
  return left_of(a, b) && left_of(b, c) && left_of(c, a);
}

}  // namespace

Triangulation triangulate(const TranslationSurface& x) {
  Triangulation tr;
  tr.class_count = x.vertex_class_count();
  tr.class_multiple.assign(static_cast<std::size_t>(tr.class_count), 1);
  for (const auto& c : x.cone_points()) tr.class_multiple[static_cast<std::size_t>(c.vertex_class)] = c.multiple;

  std::map<std::pair<int, int>, std::pair<int, int>> poly_edge;  // (polygon, edge) -> (tri, k)
  for (int p = 0; p < x.polygon_count(); ++p) {
    const auto& poly = x.polygon(p);
    const int n = static_cast<int>(poly.size());
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::vector<std::array<int, 3>> local;
    while (idx.size() > 3) {
      const int m = static_cast<int>(idx.size());
      int best = -1;
      double best_quality = -1;
      for (int i = 0; i < m; ++i) {
        const int a = idx[static_cast<std::size_t>((i + m - 1) % m)], b = idx[static_cast<std::size_t>(i)],
                  c = idx[static_cast<std::size_t>((i + 1) % m)];
        const Vec2 A = poly[static_cast<std::size_t>(a)], B = poly[static_cast<std::size_t>(b)], C = poly[static_cast<std::size_t>(c)];
        if (!(cross(B - A, C - B) > 1e-12 * std::abs(B - A) * std::abs(C - B))) continue;
        bool blocked = false;
        for (int other : idx) {
          if (other == a || other == b || other == c) continue;
          if (inside_triangle(poly[static_cast<std::size_t>(other)], A, B, C)) {
            blocked = true;
            break;
          }
        }
        if (blocked) continue;
        const double q = std::min({angle_at(A, B, C), angle_at(B, C, A), angle_at(C, A, B)});
        if (q > best_quality) {
          best_quality = q;
          best = i;
        }
      }
      if (best < 0) fail(Errc::DegenerateGeometry, "ear clipping found no ear in polygon " + std::to_string(p));
      local.push_back({idx[static_cast<std::size_t>((best + m - 1) % m)], idx[static_cast<std::size_t>(best)],
                       idx[static_cast<std::size_t>((best + 1) % m)]});
      idx.erase(idx.begin() + best);
    }
    local.push_back({idx[0], idx[1], idx[2]});

    std::map<std::pair<int, int>, std::pair<int, int>> diag;
    for (const auto& tri : local) {
      const int t = static_cast<int>(tr.tris.size());
      Triangle T;
      for (int k = 0; k < 3; ++k) {
        T.v[static_cast<std::size_t>(k)] = poly[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
        T.vclass[static_cast<std::size_t>(k)] = x.vertex_class(p, tri[static_cast<std::size_t>(k)]);
      }
      tr.tris.push_back(T);
      for (int k = 0; k < 3; ++k) {
        const int a = tri[static_cast<std::size_t>(k)], b = tri[static_cast<std::size_t>(nx(k))];
        if (b == (a + 1) % n) {
          poly_edge[{p, a}] = {t, k};
        } else {
          diag[{a, b}] = {t, k};
        }
      }
    }
    for (const auto& [ab, tk] : diag) {
      auto it = diag.find({ab.second, ab.first});
      if (it == diag.end()) fail(Errc::Internal, "unmatched diagonal in ear clipping");
      auto& T = tr.tris[static_cast<std::size_t>(tk.first)];
      T.nb_tri[static_cast<std::size_t>(tk.second)] = it->second.first;
      T.nb_edge[static_cast<std::size_t>(tk.second)] = it->second.second;
    }
  }
  for (const auto& [e, f] : x.gluings()) {
    const auto a = poly_edge.at({e.polygon, e.edge}), b = poly_edge.at({f.polygon, f.edge});
    tr.tris[static_cast<std::size_t>(a.first)].nb_tri[static_cast<std::size_t>(a.second)] = b.first;
    tr.tris[static_cast<std::size_t>(a.first)].nb_edge[static_cast<std::size_t>(a.second)] = b.second;
    tr.tris[static_cast<std::size_t>(b.first)].nb_tri[static_cast<std::size_t>(b.second)] = a.first;
    tr.tris[static_cast<std::size_t>(b.first)].nb_edge[static_cast<std::size_t>(b.second)] = a.second;
  }
  return tr;
}

namespace {

// A and B glued along edges nx(m) and pv(m) of A form a cylinder with core
// vector c = edge m. Flipping across such a thin cylinder only shifts the apex
// by c per flip, so a twist of many turns is done in one step. Returns false
// when the twist would be less than two turns.
bool twist_cylinder(Triangulation& tr, int a, int m) {
  Triangle& A = tr.tris[static_cast<std::size_t>(a)];
  const int b = A.nb_tri[static_cast<std::size_t>(nx(m))];
  const int j1 = A.nb_edge[static_cast<std::size_t>(nx(m))];
  Triangle& B = tr.tris[static_cast<std::size_t>(b)];
  const Vec2 P = A.v[static_cast<std::size_t>(m)], c = A.v[static_cast<std::size_t>(nx(m))] - P;
  const Vec2 Q = A.v[static_cast<std::size_t>(pv(m))];
  const double mu = dot(Q - P, c) / std::norm(c);
  const double k = std::round(0.5 - mu);
  if (std::abs(k) < 2) return false;
  const Vec2 Qn = Q + k * c;
  A.v[static_cast<std::size_t>(pv(m))] = Qn;
  const Vec2 base = B.v[static_cast<std::size_t>(j1)];
  B.v[static_cast<std::size_t>(nx(j1))] = base + (P + c - Qn);
  B.v[static_cast<std::size_t>(pv(j1))] = base + c;
  return true;
}

// Edge m of triangle a such that the other two edges are glued to one
// neighbour in the cylinder pattern; the shortest such edge, or -1.
int cylinder_edge(const Triangulation& tr, int a) {
  const Triangle& A = tr.tris[static_cast<std::size_t>(a)];
  int best = -1;
  double len = INFINITY;
  for (int m = 0; m < 3; ++m) {
    const int b = A.nb_tri[static_cast<std::size_t>(nx(m))];
    if (b == a || A.nb_tri[static_cast<std::size_t>(pv(m))] != b) continue;
    if (A.nb_edge[static_cast<std::size_t>(pv(m))] != nx(A.nb_edge[static_cast<std::size_t>(nx(m))])) continue;
    const double l = std::abs(A.v[static_cast<std::size_t>(nx(m))] - A.v[static_cast<std::size_t>(m)]);
    if (l < len) {
      len = l;
      best = m;
    }
  }
  return best;
}

}  // namespace

long make_delaunay(Triangulation& tr, long max_flips) {
  auto& T = tr.tris;
  std::vector<std::pair<int, int>> stack;
  std::vector<char> queued(T.size() * 3, 1);
  for (int t = static_cast<int>(T.size()) - 1; t >= 0; --t)
    for (int k = 2; k >= 0; --k) stack.emplace_back(t, k);
  long flips = 0;
  auto tri = [&](int t) -> Triangle& { return T[static_cast<std::size_t>(t)]; };

  while (!stack.empty()) {
    const auto [t, k] = stack.back();
    stack.pop_back();
    queued[static_cast<std::size_t>(3 * t + k)] = 0;
    Triangle& A = tri(t);
    const int b = A.nb_tri[static_cast<std::size_t>(k)], j = A.nb_edge[static_cast<std::size_t>(k)];
    if (b == t) continue;
    Triangle& B = tri(b);
    const Vec2 a0 = A.v[static_cast<std::size_t>(k)], a1 = A.v[static_cast<std::size_t>(nx(k))], C = A.v[static_cast<std::size_t>(pv(k))];
    const Vec2 D = B.v[static_cast<std::size_t>(pv(j))] + (a1 - B.v[static_cast<std::size_t>(j)]);
    if (!(angle_at(C, a0, a1) + angle_at(D, a1, a0) > std::numbers::pi + 1e-10)) continue;
    if (!(cross(D - a0, C - a0) > 0 && cross(a1 - D, C - D) > 0)) continue;
    if (++flips > max_flips) fail(Errc::BudgetExceeded, "Delaunay flip budget exhausted");
    if (const int m = cylinder_edge(tr, t); m >= 0 && twist_cylinder(tr, t, m)) {
      const int nb = tri(t).nb_tri[static_cast<std::size_t>(nx(m))];
      for (int tt : {t, nb}) {
        for (int e = 0; e < 3; ++e) {
          for (const auto& r : {std::pair{tt, e}, std::pair{tri(tt).nb_tri[static_cast<std::size_t>(e)], tri(tt).nb_edge[static_cast<std::size_t>(e)]}}) {
            auto& q = queued[static_cast<std::size_t>(3 * r.first + r.second)];
            if (!q) {
              q = 1;
              stack.push_back(r);
            }
          }
        }
      }
      continue;
    }

    using Ref = std::pair<int, int>;
    auto partner = [&](int tt, int e) { return Ref{tri(tt).nb_tri[static_cast<std::size_t>(e)], tri(tt).nb_edge[static_cast<std::size_t>(e)]}; };
    const Ref oldA1{t, nx(k)}, oldA2{t, pv(k)}, oldB1{b, nx(j)}, oldB2{b, pv(j)};
    const Ref newA1{b, 1}, newA2{t, 2}, newB1{t, 0}, newB2{b, 0};
    const std::array<std::pair<Ref, Ref>, 4> moves{{{oldA1, newA1}, {oldA2, newA2}, {oldB1, newB1}, {oldB2, newB2}}};
    std::array<Ref, 4> partners{partner(oldA1.first, oldA1.second), partner(oldA2.first, oldA2.second),
                                partner(oldB1.first, oldB1.second), partner(oldB2.first, oldB2.second)};
    const int cA0 = A.vclass[static_cast<std::size_t>(k)], cA1 = A.vclass[static_cast<std::size_t>(nx(k))],
              cC = A.vclass[static_cast<std::size_t>(pv(k))], cD = B.vclass[static_cast<std::size_t>(pv(j))];

    Triangle T1, T2;
    T1.v = {Vec2(0, 0), D - a0, C - a0};
    T1.vclass = {cA0, cD, cC};
    T2.v = {Vec2(0, 0), a1 - D, C - D};
    T2.vclass = {cD, cA1, cC};
    T1.nb_tri[1] = b;
    T1.nb_edge[1] = 2;
    T2.nb_tri[2] = t;
    T2.nb_edge[2] = 1;
    tri(t) = T1;
    tri(b) = T2;
    auto remap = [&](Ref r) {
      for (const auto& [from, to] : moves)
        if (from == r) return std::make_pair(to, true);
      return std::make_pair(r, false);
    };
    for (std::size_t m = 0; m < 4; ++m) {
      const Ref at = moves[m].second;
      const auto [p, internal] = remap(partners[m]);
      tri(at.first).nb_tri[static_cast<std::size_t>(at.second)] = p.first;
      tri(at.first).nb_edge[static_cast<std::size_t>(at.second)] = p.second;
      if (!internal) {
        tri(p.first).nb_tri[static_cast<std::size_t>(p.second)] = at.first;
        tri(p.first).nb_edge[static_cast<std::size_t>(p.second)] = at.second;
      }
    }
    for (const auto& [from, to] : moves) {
      auto& q = queued[static_cast<std::size_t>(3 * to.first + to.second)];
      if (!q) {
        q = 1;
        stack.push_back(to);
      }
    }
  }
  return flips;
}

void act_in_place(const SL2Matrix& m, Triangulation& tr) {
  for (auto& t : tr.tris)
    for (auto& v : t.v) v = m.apply(v);
}

double total_area(const Triangulation& tr) {
  double a = 0;
  for (const auto& t : tr.tris) a += 0.5 * cross(t.v[1] - t.v[0], t.v[2] - t.v[0]);
  return a;
}

TranslationSurface to_surface(const Triangulation& tr) {
  std::vector<std::vector<Vec2>> polys;
  std::vector<std::pair<EdgeRef, EdgeRef>> glue;
  for (std::size_t t = 0; t < tr.tris.size(); ++t) {
    const auto& T = tr.tris[t];
    polys.push_back({T.v[0], T.v[1], T.v[2]});
    for (int k = 0; k < 3; ++k) {
      const int u = T.nb_tri[static_cast<std::size_t>(k)], e = T.nb_edge[static_cast<std::size_t>(k)];
      if (std::make_pair(static_cast<int>(t), k) < std::make_pair(u, e)) glue.push_back({{static_cast<int>(t), k}, {u, e}});
    }
  }
  return TranslationSurface(std::move(polys), std::move(glue));
}

Triangulation delaunay_triangulation(const TranslationSurface& x) {
  Triangulation tr = triangulate(x);
  make_delaunay(tr);
  return tr;
}

TranslationSurface delaunay_surface(const TranslationSurface& x) { return to_surface(delaunay_triangulation(x)); }

}  // namespace teichlab
