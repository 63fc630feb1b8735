#pragma once

#include <array>
#include <vector>

#include "teichlab/surface.hpp"

namespace teichlab {

// Triangle of a triangulated translation surface in its own planar frame.
// Edge k runs from v[k] to v[k+1]; it is glued to edge nb_edge[k] of triangle
// nb_tri[k], so v[k] ~ w[j+1] and v[k+1] ~ w[j] for the partner's vertices w.
struct Triangle {
  std::array<Vec2, 3> v;
  std::array<int, 3> nb_tri{};
  std::array<int, 3> nb_edge{};
  std::array<int, 3> vclass{};
};

struct Triangulation {
  std::vector<Triangle> tris;
  int class_count = 0;
  std::vector<int> class_multiple;  // cone angle / 2pi per vertex class
};

// Ear clipping on each polygon; vertex classes carried over from x.
Triangulation triangulate(const TranslationSurface& x);

// Edge flips until every edge is locally Delaunay (opposite angles sum to at
// most pi + 1e-10). Returns the number of flips. Throws BudgetExceeded past
// max_flips.
long make_delaunay(Triangulation& tr, long max_flips = 10'000'000);

// In place: applies m to every triangle.
void act_in_place(const SL2Matrix& m, Triangulation& tr);

TranslationSurface to_surface(const Triangulation& tr);

// Delaunay triangulation of x as a surface whose polygons are triangles.
TranslationSurface delaunay_surface(const TranslationSurface& x);
Triangulation delaunay_triangulation(const TranslationSurface& x);

double total_area(const Triangulation& tr);

}  // namespace teichlab
