#include "rnewton/manifolds/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rnewton {

namespace {
// sin(t)/t with a series branch for small arguments.
double sinc(double t) {
  if (std::abs(t) < 1e-4) {
    double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}
}  // namespace

SphereManifold::SphereManifold(int ambient_dim) : ambient_(ambient_dim) {
  if (ambient_dim < 2 || ambient_dim > 1024) {
    throw DimensionError("sphere: ambient dim must be in [2, 1024]");
  }
}

double SphereManifold::injectivity_radius(const Point& p) const {
  check_owns(p);
  return std::numbers::pi;
}

bool SphereManifold::is_point(const Eigen::VectorXd& coords, double tol) const {
  return coords.size() == ambient_ && coords.allFinite() &&
         std::abs(coords.norm() - 1.0) <= tol;
}

bool SphereManifold::is_tangent(const Point& p, const Eigen::VectorXd& components,
                                double tol) const {
  if (components.size() != ambient_ || !components.allFinite()) return false;
  return std::abs(p.coords.dot(components)) <=
         tol * std::max(1.0, components.norm());
}

double SphereManifold::distance(const Point& p, const Point& q) const {
  check_owns(p);
  check_owns(q);
  const double c = p.coords.dot(q.coords);
  const double s = (q.coords - c * p.coords).norm();
  return std::atan2(s, c);
}

double SphereManifold::inner_impl(const Point&, const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& v) const {
  return u.dot(v);
}

Eigen::VectorXd SphereManifold::exp_impl(const Point& p,
                                         const Eigen::VectorXd& v) const {
  const double theta = v.norm();
  Eigen::VectorXd out = std::cos(theta) * p.coords + sinc(theta) * v;
  out.normalize();
  return out;
}

Eigen::VectorXd SphereManifold::log_impl(const Point& p, const Point& q) const {
  const double c = std::clamp(p.coords.dot(q.coords), -1.0, 1.0);
  const Eigen::VectorXd u = q.coords - c * p.coords;
  const double s = u.norm();
  if (s < 1e-9) {
    if (c < 0.0) {
      throw InjectivityViolation(
          "sphere: log undefined near the antipode (d(p,q) -> pi)");
    }
    // q == p to first order; the tangent lift of the residual is exact here.
    return u;
  }
  return (std::atan2(s, c) / s) * u;
}

Eigen::VectorXd SphereManifold::transport_impl(const Point& p, const Point& q,
                                               const Eigen::VectorXd& v) const {
  if (distance(p, q) < 1e-12) {
    return v;  // P_pp = I; avoids 0/0 in the rotation formula
  }
  const Eigen::VectorXd u = log_impl(p, q);
  const double theta = u.norm();
  const Eigen::VectorXd e = u / theta;
  const double a = v.dot(e);
  // Rank-2 rotation in span{p, e}; the normal component is untouched.
  return v - a * e + a * (std::cos(theta) * e - std::sin(theta) * p.coords);
}

Eigen::VectorXd SphereManifold::project_point_impl(
    const Eigen::VectorXd& coords) const {
  const double n = coords.norm();
  if (!(n > 0.0) || !coords.allFinite()) {
    throw MembershipError("sphere: cannot project the zero vector");
  }
  return coords / n;
}

Eigen::VectorXd SphereManifold::project_tangent_impl(
    const Point& p, const Eigen::VectorXd& w) const {
  return w - p.coords.dot(w) * p.coords;
}

}  // namespace rnewton
