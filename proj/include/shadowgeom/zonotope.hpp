#pragma once

#include "shadowgeom/polytope.hpp"

#include <cstdint>

namespace shadowgeom {

/// Z = center + sum_i [-g_i, g_i]; generators stored as columns.
class Zonotope {
 public:
  Zonotope() = default;
  /// Throws degenerate-zonotope if the generators do not span R^n.
  Zonotope(Vec center, Points generators);

  int dim() const { return static_cast<int>(center_.size()); }
  const Vec& center() const { return center_; }
  const Points& generators() const { return generators_; }
  int num_generators() const { return static_cast<int>(generators_.cols()); }

 private:
  Vec center_;
  Points generators_;
};

/// Conversion cost bound for zonotope_to_polytope.
inline constexpr int kMaxConvertGenerators = 12;
/// Largest subset count summed exactly by the determinant expansions.
inline constexpr double kMaxExactSubsets = 2e7;

/// Combine generators with |cos angle| > 1 - 1e-10; lengths add.
Points merge_parallel_generators(const Points& generators);

double zonotope_support(const Zonotope& z, const Vec& x);
/// 2^n sum over n-subsets of |det|; throws too-many-generators when the
/// number of subsets exceeds kMaxExactSubsets.
double zonotope_volume(const Zonotope& z);
/// Unbiased random-subset estimate of the determinant expansion; exact when
/// the subset count is within budget.
Estimate zonotope_volume_estimate(const Zonotope& z, int samples, RngSeed seed);
double zonotope_surface_area(const Zonotope& z);
/// (n-1)-volume of P_{xi^perp} Z via 2^{n-1} sum |det[g_J, xi]|.
double zonotope_shadow_volume(const Zonotope& z, const Direction& xi);

/// Generalised cross products w_J of all (n-1)-subsets, so that
/// |P_{xi^perp} Z| = 2^{n-1} sum_J |<w_J, xi>|.
Points shadow_generators(const Zonotope& z);

Zonotope projection_body(const Polytope& p);
Zonotope projection_body(const SurfaceAreaMeasure& sigma);
Zonotope zonotope_project(const Zonotope& z, const SubspaceBasis& f);
Polytope zonotope_to_polytope(const Zonotope& z);

SphereMinimum zonoid_min_projection(const Zonotope& z, RngSeed seed, int restarts = -1);

/// Binomial coefficient as a double.
double binomial(int n, int k);

/// Calls visit(indices) for every k-subset of {0..m-1} in lexicographic order.
template <class Visit>
void for_each_subset(int m, int k, Visit&& visit) {
  if (k > m || k < 0) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// Vector w with det[v_1, ..., v_{n-1}, x] = <w, x> for the columns of `vs`.
Vec generalized_cross(const Mat& vs);

}  // namespace shadowgeom
