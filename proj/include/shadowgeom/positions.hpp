#pragma once

#include "shadowgeom/polytope.hpp"

#include <vector>

namespace shadowgeom {

struct PositionResult {
  /// Linear part of the position map x -> transform * (x - translation).
  Mat transform;
  Vec translation;
  double residual = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Objective value after each accepted step (min-mean-width only).
  std::vector<double> trace;

  Polytope apply(const Polytope& p) const;
};

struct Ellipsoid {
  /// E = {x : (x - center)^T shape^{-1} (x - center) <= 1}.
  Mat shape;
  Vec center;

  double volume() const;
};

struct MinSurfaceResult {
  PositionResult position;
  /// S(TK) / |TK|^{(n-1)/n} at the returned iterate.
  double partial = 0.0;
};

/// Damped Petty fixed point on the surface area measure. The transform has
/// determinant one; the residual is ||n M - I||_F with M the normalised second
/// moment matrix of sigma_{TK}.
MinSurfaceResult minimal_surface_position(const Polytope& p, double tol = 1e-6, int max_iter = 500);
/// Petty residual ||n M - I||_F of sigma_{TK}.
double petty_residual(const SurfaceAreaMeasure& sigma, const Mat& t);

struct IsotropicResult {
  PositionResult position;
  double L_K = 0.0;
};
/// Exact whitening: centroid to the origin, covariance L_K^2 I, volume one.
IsotropicResult isotropic_position(const Polytope& p);

struct EllipsoidResult {
  PositionResult position;
  Ellipsoid ellipsoid;
};

/// Minimum-volume enclosing ellipsoid by Khachiyan's method with away steps.
/// The transform maps the ellipsoid onto a centred ball (determinant one).
EllipsoidResult lowner_position(const Polytope& p, double tol = 1e-7, int max_iter = 100000);

/// Maximum-volume inscribed ellipsoid by a log-barrier Newton method. The
/// residual is the larger of the barrier duality gap and the violation of
/// John's decomposition of the identity at the contact normals.
EllipsoidResult john_position(const Polytope& p, double tol = 1e-7);

/// Best-effort descent of w(TK) over SL(n) with a fixed direction sample.
/// Residual: max |n mean(h theta theta^T)/w - I| eigenvalue deviation.
PositionResult min_mean_width_position(const Polytope& p, int samples, int steps, RngSeed seed);

double volume_ratio(const Polytope& p);
double outer_volume_ratio(const Polytope& p);

/// True when every vertex has its negative among the vertices.
bool is_centrally_symmetric(const Polytope& p);

}  // namespace shadowgeom
