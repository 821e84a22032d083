#pragma once

#include "shadowgeom/types.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace shadowgeom {

/// Unit vector in R^n.
using Direction = Vec;

/// Seed plus an independent stream selector. Identical (seed, stream_id)
/// pairs always reproduce the same sample sequence.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// Child stream keyed by a tag (check id, body name, quantity name).
  RngSeed derive(std::string_view tag) const;
  RngSeed derive(std::uint64_t index) const;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

std::uint64_t fnv1a(std::string_view text);

std::mt19937_64 make_engine(RngSeed seed);

/// Orthonormal k-frame (rows) spanning a k-dimensional subspace of R^n.
struct SubspaceBasis {
  Mat frame;  // k x n, frame * frame^T = I_k

  int dim_ambient() const { return static_cast<int>(frame.cols()); }
  int dim_sub() const { return static_cast<int>(frame.rows()); }

  /// Coordinates of x in the frame.
  Vec coords(const Vec& x) const { return frame * x; }

  /// The hyperplane xi^perp as an (n-1)-frame.
  static SubspaceBasis hyperplane(const Direction& xi);
  /// Orthonormalises the rows of an arbitrary full-rank k x n matrix.
  static SubspaceBasis from_rows(const Mat& rows);
};

/// Rows spanning the orthogonal complement of the row space of `frame`.
Mat orthocomplement(const Mat& frame);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  bool exact = false;

  static Estimate exact_value(double value) { return {value, 0.0, 1, true}; }
  double rel_error() const;
};

Estimate mc_estimate(std::span<const double> values);

std::vector<Direction> sample_sphere(int n, int count, RngSeed seed);
std::vector<SubspaceBasis> sample_grassmannian(int n, int k, int count, RngSeed seed);

Direction random_direction(int n, std::mt19937_64& engine);
SubspaceBasis random_subspace(int n, int k, std::mt19937_64& engine);

struct MinimizeOptions {
  double step_tol = 1e-10;
  int max_iter = 4000;
  /// Starting points tried in addition to the random restarts.
  std::vector<Vec> extra_starts;
  std::vector<SubspaceBasis> extra_frames;
};

struct SphereMinimum {
  Direction direction;
  double value = 0.0;
};

struct GrassmannMinimum {
  SubspaceBasis subspace;
  double value = 0.0;
};

using SphereObjective = std::function<double(const Direction&)>;
using GrassmannObjective = std::function<double(const SubspaceBasis&)>;

int default_restarts(int n);

/// Best of `restarts` local descents from uniform starting directions.
/// Each descent uses central-difference (sub)gradients with Armijo halving and
/// falls back to compass polling, stopping once the poll step drops below
/// `step_tol`.
SphereMinimum minimize_on_sphere(const SphereObjective& objective, int n, int restarts,
                                 RngSeed seed, const MinimizeOptions& options = {});

GrassmannMinimum minimize_on_grassmannian(const GrassmannObjective& objective, int n, int k,
                                          int restarts, RngSeed seed,
                                          const MinimizeOptions& options = {});

}  // namespace shadowgeom
