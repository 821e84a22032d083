#pragma once

#include "shadowgeom/hull.hpp"
#include "shadowgeom/sampling.hpp"

#include <array>
#include <vector>

namespace shadowgeom {

struct PolytopeFacet {
  Direction normal;
  double offset = 0.0;
  /// (n-1)-volume of the facet.
  double measure = 0.0;
  /// Indices into Polytope::vertices().
  std::vector<int> vertices;
};

/// (n-2)-face shared by two merged facets.
struct PolytopeRidge {
  int facet_a = 0;
  int facet_b = 0;
  double measure = 0.0;
};

struct SurfaceAreaMeasure {
  struct Atom {
    Direction direction;
    double weight = 0.0;
  };
  int dim = 0;
  std::vector<Atom> atoms;

  double total() const;
};

/// Convex polytope with full-dimensional interior, stored as its extreme
/// points plus merged facet data. Immutable after construction.
class Polytope {
 public:
  Polytope() = default;

  int dim() const { return dim_; }
  const Points& vertices() const { return vertices_; }
  int num_vertices() const { return static_cast<int>(vertices_.cols()); }
  const std::vector<PolytopeFacet>& facets() const { return facets_; }
  const std::vector<PolytopeRidge>& ridges() const { return ridges_; }
  double volume() const { return volume_; }
  double surface_area() const { return surface_; }
  /// Circumradius about the origin; reference scale for tolerances.
  double scale() const { return scale_; }
  const Vec& interior_point() const { return interior_; }
  /// True if every facet offset exceeds 1e-12 * scale.
  bool origin_interior() const;

  Vec vertex(int i) const { return vertices_.col(i); }

 private:
  friend Polytope convex_hull(const Points& points);
  friend struct PolytopeMoments centroid_and_covariance(const Polytope& p);

  int dim_ = 0;
  Points vertices_;
  std::vector<PolytopeFacet> facets_;
  std::vector<PolytopeRidge> ridges_;
  double volume_ = 0.0;
  double surface_ = 0.0;
  double scale_ = 0.0;
  Vec interior_;
  // Boundary triangulation kept for moment computations.
  Points tri_points_;
  std::vector<std::array<int, kMaxDim>> tri_facets_;
};

/// Facet merge tolerances (angular and relative offset).
inline constexpr double kFacetMergeTol = 1e-8;

Polytope convex_hull(const Points& points);
/// Convenience overload checking that every point has dimension d.
Polytope convex_hull(const std::vector<Vec>& points, int d);

double volume(const Polytope& p);
SurfaceAreaMeasure surface_measure(const Polytope& p);
double support(const Polytope& p, const Vec& x);
double gauge(const Polytope& p, const Direction& theta);
Polytope polar(const Polytope& p);
Polytope project(const Polytope& p, const SubspaceBasis& f);
/// Volume and boundary measure of P_F(P) computed without building a Polytope.
ShadowMeasure shadow_measure(const Polytope& p, const SubspaceBasis& f);
/// Length of the one-dimensional shadow h(theta) + h(-theta).
double interval_shadow(const Polytope& p, const Direction& direction);
Polytope transform(const Polytope& p, const Mat& t);
double surface_area_under_transform(const Polytope& p, const Mat& t);
/// Same closed form evaluated on a bare surface area measure.
double surface_area_under_transform(const SurfaceAreaMeasure& sigma, const Mat& t);
/// |P_{xi^perp} P| = (1/2) sum a_i |<xi, u_i>|.
/// S(P_{xi^perp} K) summed over the silhouette ridges.
double shadow_surface(const Polytope& p, const Direction& xi);
/// Exact sphere average of S(P_{xi^perp} K) from ridge measures and dihedral angles.
double mean_shadow_surface(const Polytope& p);
double cauchy_shadow_volume(const SurfaceAreaMeasure& sigma, const Direction& xi);

struct Inball {
  double radius = 0.0;
  Vec center;
};
Inball inradius(const Polytope& p);
double circumradius(const Polytope& p);

struct PolytopeMoments {
  Vec centroid;
  Mat covariance;
};
PolytopeMoments centroid_and_covariance(const Polytope& p);

/// Maximise c^T x subject to A x <= b from a strictly feasible start x0.
/// The feasible region must be bounded in every direction d with c^T d >= 0.
Eigen::VectorXd maximize_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& x0);

}  // namespace shadowgeom
