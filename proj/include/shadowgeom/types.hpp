#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace shadowgeom {

/// Largest ambient dimension supported by the polytope kernel.
inline constexpr int kMaxDim = 8;

/// Small stack-allocated vector (dimension <= kMaxDim).
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
/// Small stack-allocated matrix (both extents <= kMaxDim).
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
/// Column-major point cloud: one point per column.
using Points = Eigen::MatrixXd;

enum class ErrorKind {
  kInvalidDimension,
  kEmptyInput,
  kObjectiveError,
  kDegenerateInput,
  kOriginNotInterior,
  kSingularMatrix,
  kDegenerateZonotope,
  kTooManyGenerators,
  kInvalidArgument,
  kIo,
};

const char* to_string(ErrorKind kind);

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by hull construction; carries the affine dimension that was found.
class DegenerateInputError : public GeometryError {
 public:
  DegenerateInputError(int affine_dim, int expected)
      : GeometryError(ErrorKind::kDegenerateInput,
                      "points span an affine subspace of dimension " + std::to_string(affine_dim) +
                          ", expected " + std::to_string(expected)),
        affine_dim_(affine_dim) {}

  int affine_dim() const noexcept { return affine_dim_; }

 private:
  int affine_dim_;
};

}  // namespace shadowgeom
