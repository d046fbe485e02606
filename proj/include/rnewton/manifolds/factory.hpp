#pragma once

#include "rnewton/manifold.hpp"

#include <memory>

namespace rnewton {

enum class ManifoldKind { euclidean, sphere, spd, hyperboloid };

ManifoldKind manifold_kind_from_string(const std::string& s);
std::string to_string(ManifoldKind kind);

/// Builds a closed-form kernel. The `dim` argument follows each kernel's
/// constructor convention: euclidean = dimension, sphere = ambient
/// dimension (S^{dim-1}), spd = matrix size, hyperboloid = intrinsic
/// dimension.
std::shared_ptr<const Manifold> make_manifold(ManifoldKind kind, int dim);

}  // namespace rnewton
