#include "rnewton/manifolds/hyperboloid.hpp"

#include <cmath>
#include <limits>

namespace rnewton {

HyperboloidManifold::HyperboloidManifold(int intrinsic_dim) : dim_(intrinsic_dim) {
  if (intrinsic_dim < 1 || intrinsic_dim > 1023) {
    throw DimensionError("hyperboloid: intrinsic dim must be in [1, 1023]");
  }
}

double HyperboloidManifold::minkowski(const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& y) {
  return -x(0) * y(0) + x.tail(x.size() - 1).dot(y.tail(y.size() - 1));
}

double HyperboloidManifold::injectivity_radius(const Point& p) const {
  check_owns(p);
  return std::numeric_limits<double>::infinity();
}

bool HyperboloidManifold::is_point(const Eigen::VectorXd& coords, double tol) const {
  if (coords.size() != dim_ + 1 || !coords.allFinite()) return false;
  if (!(coords(0) > 0.0)) return false;
  const double scale = std::max(1.0, coords.squaredNorm());
  return std::abs(minkowski(coords, coords) + 1.0) <= tol * scale;
}

bool HyperboloidManifold::is_tangent(const Point& p, const Eigen::VectorXd& components,
                                     double tol) const {
  if (components.size() != dim_ + 1 || !components.allFinite()) return false;
  const double scale =
      std::max(1.0, p.coords.norm() * std::max(1.0, components.norm()));
  return std::abs(minkowski(p.coords, components)) <= tol * scale;
}

double HyperboloidManifold::distance(const Point& p, const Point& q) const {
  check_owns(p);
  check_owns(q);
  // ⟨q−p, q−p⟩_M = 4 sinh²(d/2); stable for nearby points where
  // acosh(−⟨p,q⟩_M) loses all precision.
  const Eigen::VectorXd diff = q.coords - p.coords;
  const double bsq = std::max(0.0, minkowski(diff, diff));
  return 2.0 * std::asinh(0.5 * std::sqrt(bsq));
}

double HyperboloidManifold::inner_impl(const Point&, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& v) const {
  return minkowski(u, v);
}

Eigen::VectorXd HyperboloidManifold::exp_impl(const Point& p,
                                              const Eigen::VectorXd& v) const {
  const double theta = std::sqrt(std::max(0.0, minkowski(v, v)));
  Eigen::VectorXd out;
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    out = (1.0 + t2 / 2.0 + t2 * t2 / 24.0) * p.coords +
          (1.0 + t2 / 6.0 + t2 * t2 / 120.0) * v;
  } else {
    out = std::cosh(theta) * p.coords + (std::sinh(theta) / theta) * v;
  }
  return project_point_impl(out);
}

Eigen::VectorXd HyperboloidManifold::log_impl(const Point& p, const Point& q) const {
  const Eigen::VectorXd diff = q.coords - p.coords;
  const double bsq = std::max(0.0, minkowski(diff, diff));
  if (bsq < 1e-32) {
    return project_tangent_impl(p, diff);
  }
  const double c = 1.0 + 0.5 * bsq;  // cosh d, free of cancellation
  const double s = std::sqrt(0.5 * bsq * (0.5 * bsq + 2.0));  // sqrt(c²−1)
  const double d = 2.0 * std::asinh(0.5 * std::sqrt(bsq));
  const Eigen::VectorXd w = q.coords - c * p.coords;
  return (d / s) * w;
}

Eigen::VectorXd HyperboloidManifold::transport_impl(const Point& p, const Point& q,
                                                    const Eigen::VectorXd& v) const {
  const double c = -minkowski(p.coords, q.coords);
  const double bqv = minkowski(q.coords, v);
  return v + (bqv / (1.0 + c)) * (p.coords + q.coords);
}

Eigen::VectorXd HyperboloidManifold::project_point_impl(
    const Eigen::VectorXd& coords) const {
  // Lift the spatial part back onto the sheet; exact membership.
  Eigen::VectorXd out = coords;
  out(0) = std::sqrt(1.0 + coords.tail(dim_).squaredNorm());
  return out;
}

Eigen::VectorXd HyperboloidManifold::project_tangent_impl(
    const Point& p, const Eigen::VectorXd& w) const {
  return w + minkowski(p.coords, w) * p.coords;
}

}  // namespace rnewton
