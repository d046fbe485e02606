#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rnewton {

/// Two tangent objects were combined whose base points (or owning
/// manifolds) differ.
struct BasePointMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// log/transport requested outside the injectivity ball of the base point.
struct InjectivityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Point left the domain of a field or chart.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Coordinates fail a manifold membership or tangency predicate.
struct MembershipError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative procedure hit its step or iteration limit.
struct NonconvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// First-order expansion residual is undefined (probe equals center).
struct ResidualUndefined : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unsupported manifold kind or dimension.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class CurvatureSign { nonnegative, nonpositive, mixed, flat };

std::string to_string(CurvatureSign sign);

/// A location on a manifold, stored in the manifold's canonical ambient
/// (or chart) representation. `manifold_tag` identifies the owning
/// manifold instance so cross-manifold mixups fail fast.
struct Point {
  Eigen::VectorXd coords;
  std::uint64_t manifold_tag = 0;
};

/// Element of T_pM; components use the same representation as Point coords.
struct TangentVector {
  Point base;
  Eigen::VectorXd components;
};

/// Linear map on T_pM expressed in an orthonormal frame of T_pM.
/// With an orthonormal frame the operator norm is the plain spectral
/// norm of `matrix` and linear solves are small dense problems.
struct TangentOperator {
  Point base;
  Eigen::MatrixXd matrix;
  std::vector<TangentVector> frame;
};

}  // namespace rnewton
