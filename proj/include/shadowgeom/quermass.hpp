#pragma once

#include "shadowgeom/zonotope.hpp"

#include <functional>
#include <vector>

namespace shadowgeom {

/// Volume of the Euclidean unit ball in R^n (omega(0) = 1).
double omega(int n);
/// b_n = (n-1) omega_{n-1} / (n omega_n^{(n-1)/n}).
double b_constant(int n);

struct DimConstants {
  int n = 0;
  std::vector<double> omega;  // omega[m] for m = 0..n
  double b = 0.0;
};
DimConstants dim_constants(int n);

/// k-volume of P_F K for F in G_{n,k}; k = 1 gives the width.
using ShadowVolume = std::function<double(const SubspaceBasis&)>;

/// Default shadow evaluator of a polytope: interval for k = 1, Cauchy formula
/// for k = n-1, hull of the projected vertices otherwise.
ShadowVolume polytope_shadow_volume(const Polytope& p);

/// Haar average of |P_F K| over G_{n,k} (exact for k = n).
Estimate mean_shadow_volume(const ShadowVolume& shadow, int n, int k, int samples, RngSeed seed);
Estimate mean_shadow_volume(const Polytope& p, int k, int samples, RngSeed seed);

/// x -> x^e with first-order error propagation.
Estimate power_estimate(const Estimate& e, double exponent);
Estimate scale_estimate(const Estimate& e, double factor);

Estimate Q_k(const Polytope& p, int k, int samples, RngSeed seed);
/// V_{n-p}(K) = omega_n Q_{n-p}(K)^{n-p}.
Estimate quermassintegral(const Polytope& p, int pindex, int samples, RngSeed seed);
/// Sphere average of the support function (so w(Q_3) = 3/2).
Estimate mean_width(const Polytope& p, int samples, RngSeed seed);
Estimate M_value(const Polytope& p, int samples, RngSeed seed);
double vrad(const Polytope& p);
/// vrad(K polar) = (sphere mean of h_K^{-n})^{1/n}.
Estimate polar_vrad(const Polytope& p, int samples, RngSeed seed);
Estimate polar_vrad(const std::function<double(const Direction&)>& support_fn, int n, int samples, RngSeed seed);

/// V_{n-1}(K, C) = (1/n) sum a_i h_C(u_i).
double mixed_volume_vn1(const SurfaceAreaMeasure& sigma, const std::function<double(const Vec&)>& support_c);
double mixed_volume_vn1(const Polytope& p, const Polytope& c);
double mixed_volume_vn1(const Polytope& p, const Zonotope& c);

/// p_k(K) = mean |P_F K| / |K|^{k/n}.
Estimate p_k(const Polytope& p, int k, int samples, RngSeed seed);

}  // namespace shadowgeom
