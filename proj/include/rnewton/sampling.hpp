#pragma once

#include "rnewton/manifold.hpp"

#include <random>

namespace rnewton {

/// Seeded sampling helpers. All draws go through an explicit generator
/// passed by reference; there is no hidden global state.

/// Uniform direction on the unit sphere of frame coordinates.
Eigen::VectorXd random_unit_coeffs(int dim, std::mt19937_64& rng);

/// Tangent vector at p with metric norm exactly `norm`.
TangentVector random_tangent_with_norm(const Manifold& m, const Point& p,
                                       double norm, std::mt19937_64& rng);

/// Tangent vector uniform (in frame coordinates) in the ball of the given
/// radius; radius scales as U^{1/dim}.
TangentVector random_tangent_in_ball(const Manifold& m, const Point& p,
                                     double radius, std::mt19937_64& rng);

/// exp_p of a uniform tangent draw: a point in the geodesic ball B_radius(p).
Point random_point_in_ball(const Manifold& m, const Point& p, double radius,
                           std::mt19937_64& rng);

}  // namespace rnewton
