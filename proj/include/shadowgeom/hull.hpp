#pragma once

#include "shadowgeom/types.hpp"

#include <array>
#include <vector>

namespace shadowgeom {

/// Triangulated boundary of conv(points) in R^d, d >= 2.
///
/// Facets are (d-1)-simplices with outward unit normals; coplanar simplices
/// are kept separate here and merged by the Polytope constructor.
struct SimplicialHull {
  struct Facet {
    std::array<int, kMaxDim> vertices{};   // first `dim` entries are point indices
    std::array<int, kMaxDim> neighbors{};  // neighbors[i] lies across from vertices[i]
    Vec normal;
    double offset = 0.0;
    double area = 0.0;
  };

  int dim = 0;
  /// Largest distance of an input point from `interior`.
  double scale = 0.0;
  Vec interior;
  std::vector<Facet> facets;

  double volume() const;
  double surface() const;
};

/// Visibility tolerance relative to the point-cloud scale.
inline constexpr double kHullRelEps = 1e-10;

/// Quickhull (beneath-beyond) in dimension 2..kMaxDim. Throws
/// DegenerateInputError when the points do not affinely span R^d.
SimplicialHull simplicial_hull(const Points& points);

struct ShadowMeasure {
  double volume = 0.0;
  double surface = 0.0;
};

/// Volume and boundary measure of conv(points) for d = 1..kMaxDim without
/// building a Polytope. In d = 1 the boundary measure is the point count 2.
ShadowMeasure hull_measure(const Points& points);

}  // namespace shadowgeom
