#pragma once

#include <cstddef>
#include <vector>

#include "teichlab/surface.hpp"
#include "teichlab/triangulation.hpp"

namespace teichlab {

enum class Norm { Max, Euclidean };

double norm_of(Vec2 v, Norm n) noexcept;

struct SaddleConnection {
  Vec2 holonomy;       // oriented with Re > 0, or Re = 0 and Im > 0
  int start_class = 0;
  int end_class = 0;
  // Triangle edges crossed, as 3 * triangle + edge in the Delaunay triangulation
  // the search ran on. Empty for a triangulation edge.
  std::vector<int> crossings;
};

struct SaddleOptions {
  Norm norm = Norm::Max;
  std::size_t node_budget = 0;  // 0: default_node_budget()
};

// TEICH_LAB_BUDGET if set to a positive integer, else 10^6.
std::size_t default_node_budget();

// All saddle connections with norm(holonomy) <= bound, one per unoriented
// connection, sorted by (norm, argument). Throws BudgetExceeded when the
// unfolding tree exceeds the node budget.
std::vector<SaddleConnection> saddle_connections(const TranslationSurface& x, double bound, const SaddleOptions& opt = {});
std::vector<SaddleConnection> saddle_connections(const Triangulation& tr, double bound, const SaddleOptions& opt = {});

// Shortest saddle connection length. The search bound starts at the shortest
// edge of a Delaunay triangulation and shrinks as shorter connections appear.
double systole(const TranslationSurface& x, Norm norm = Norm::Max, std::size_t node_budget = 0);
// tr must already be Delaunay for the search to stay small (not required for correctness).
double systole(const Triangulation& tr, Norm norm = Norm::Max, std::size_t node_budget = 0);

// systole(x) >= eps
bool in_compact_set(const TranslationSurface& x, double eps, Norm norm = Norm::Max);

}  // namespace teichlab
