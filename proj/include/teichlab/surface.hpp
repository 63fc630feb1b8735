#pragma once

#include <string>
#include <utility>
#include <vector>

#include "teichlab/sl2.hpp"

namespace teichlab {

struct EdgeRef {
  int polygon = 0;
  int edge = 0;  // edge k runs from vertex k to vertex k+1
  bool operator==(const EdgeRef&) const = default;
};

struct ConePoint {
  int vertex_class = 0;
  double angle = 0;    // total cone angle in radians
  int multiple = 1;    // angle / 2pi
  int order() const noexcept { return multiple - 1; }
};

// Planar polygons, counterclockwise, with edges glued in pairs by translation.
// Every vertex class is reported as a cone point; classes of angle 2pi are the
// marked points (the torus has exactly one).
class TranslationSurface {
 public:
  TranslationSurface() = default;
  // Validates gluings, orientation, simplicity, partner vectors (1e-9 relative)
  // and the Gauss-Bonnet integrality. Throws InvalidSurface.
  TranslationSurface(std::vector<std::vector<Vec2>> polygons, std::vector<std::pair<EdgeRef, EdgeRef>> gluings);

  int polygon_count() const noexcept { return static_cast<int>(polygons_.size()); }
  const std::vector<std::vector<Vec2>>& polygons() const noexcept { return polygons_; }
  const std::vector<Vec2>& polygon(int p) const { return polygons_[static_cast<std::size_t>(p)]; }
  const std::vector<std::pair<EdgeRef, EdgeRef>>& gluings() const noexcept { return gluings_; }

  Vec2 vertex(int p, int k) const;
  Vec2 edge_vector(int p, int e) const;
  EdgeRef partner(EdgeRef e) const;
  int vertex_class(int p, int k) const { return vertex_class_[offset_[static_cast<std::size_t>(p)] + static_cast<std::size_t>(k)]; }
  int vertex_class_count() const noexcept { return class_count_; }

  double area() const noexcept { return area_; }
  int genus() const noexcept { return genus_; }
  int edge_pair_count() const noexcept { return static_cast<int>(gluings_.size()); }
  const std::vector<ConePoint>& cone_points() const noexcept { return cone_points_; }
  // Sorted orders of the cone points with positive order.
  std::vector<int> stratum() const;
  bool normalized() const noexcept;

 private:
  std::vector<std::vector<Vec2>> polygons_;
  std::vector<std::pair<EdgeRef, EdgeRef>> gluings_;
  std::vector<std::size_t> offset_;      // start of polygon p in flattened corner arrays
  std::vector<EdgeRef> partner_;         // flattened
  std::vector<int> vertex_class_;        // flattened
  int class_count_ = 0;
  double area_ = 0;
  int genus_ = 0;
  std::vector<ConePoint> cone_points_;

  // Skips validation; used by act(), which preserves the combinatorics.
  friend TranslationSurface act(const SL2Matrix& m, const TranslationSurface& x);
};

// Applies m to every vertex. Throws DegenerateGeometry if some polygon's area
// drops below 1e-15 of the total.
TranslationSurface act(const SL2Matrix& m, const TranslationSurface& x);

// Scales so that the area is 1.
TranslationSurface normalize_area(const TranslationSurface& x);

TranslationSurface square_torus();
// Opposite sides glued; area 1. One cone point of angle 6pi, genus 2.
TranslationSurface regular_octagon();
// Two regular pentagons (one the point reflection of the other), parallel
// sides glued; area 1. One cone point of angle 6pi, genus 2.
TranslationSurface double_pentagon();
// Unit-covolume lattice torus spanned by u and v (Im(conj(u) v) > 0 after scaling).
TranslationSurface lattice_torus(Vec2 u, Vec2 v);

// "square_torus", "regular_octagon", "double_pentagon". Throws InvalidArgument.
TranslationSurface builtin_surface(const std::string& name);
std::vector<std::string> builtin_surface_names();

inline double cross(Vec2 a, Vec2 b) noexcept { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Vec2 a, Vec2 b) noexcept { return a.real() * b.real() + a.imag() * b.imag(); }
inline double max_norm(Vec2 v) noexcept { return std::max(std::abs(v.real()), std::abs(v.imag())); }

}  // namespace teichlab
