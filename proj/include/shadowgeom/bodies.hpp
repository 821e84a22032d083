#pragma once

#include "shadowgeom/zonotope.hpp"

#include <optional>
#include <string>
#include <vector>

namespace shadowgeom {

/// A corpus body: the polytope plus its generator form when it is a zonotope.
struct Body {
  std::string name;
  Polytope polytope;
  std::optional<Zonotope> zonotope;
  /// Centrally symmetric about the origin.
  bool symmetric = false;

  int dim() const { return polytope.dim(); }
  bool is_zonoid() const { return zonotope.has_value(); }
};

/// Named bodies: cube, unit-cube, cross, simplex, ball-approx(N),
/// random-hull(N,seed), random-zonotope(m,seed), perturbed-cube(eps,seed).
Body make_named_body(const std::string& name, int dim);

/// Parses a body file (JSON text) of type vrep, hrep, zonotope or named.
Body body_from_json(const std::string& text);
Body load_body_file(const std::string& path);
/// Serialises the body as a vrep (or zonotope) document.
std::string body_to_json(const Body& body);

/// cube, cross, simplex, ball-approx(500), then `random_count` random hulls
/// and random zonotopes.
std::vector<std::string> default_corpus(int dim, int random_count = 5);

Body make_body_from_points(const std::string& name, const Points& points);
Body make_body_from_zonotope(const std::string& name, const Zonotope& z);
/// Vertices of {x : A x <= b} for a bounded polyhedron with non-empty interior.
Points hrep_vertices(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace shadowgeom
