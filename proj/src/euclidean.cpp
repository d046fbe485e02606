#include "rnewton/manifolds/euclidean.hpp"

#include <limits>

namespace rnewton {

EuclideanManifold::EuclideanManifold(int dim) : dim_(dim) {
  if (dim < 1 || dim > 1024) {
    throw DimensionError("euclidean: dim must be in [1, 1024]");
  }
}

double EuclideanManifold::injectivity_radius(const Point& p) const {
  check_owns(p);
  return std::numeric_limits<double>::infinity();
}

bool EuclideanManifold::is_point(const Eigen::VectorXd& coords, double) const {
  return coords.size() == dim_ && coords.allFinite();
}

bool EuclideanManifold::is_tangent(const Point&, const Eigen::VectorXd& components,
                                   double) const {
  return components.size() == dim_ && components.allFinite();
}

double EuclideanManifold::distance(const Point& p, const Point& q) const {
  check_owns(p);
  check_owns(q);
  return (p.coords - q.coords).norm();
}

double EuclideanManifold::inner_impl(const Point&, const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& v) const {
  return u.dot(v);
}

Eigen::VectorXd EuclideanManifold::exp_impl(const Point& p,
                                            const Eigen::VectorXd& v) const {
  return p.coords + v;
}

Eigen::VectorXd EuclideanManifold::log_impl(const Point& p, const Point& q) const {
  return q.coords - p.coords;
}

Eigen::VectorXd EuclideanManifold::transport_impl(const Point&, const Point&,
                                                  const Eigen::VectorXd& v) const {
  return v;
}

Eigen::VectorXd EuclideanManifold::project_point_impl(
    const Eigen::VectorXd& coords) const {
  return coords;
}

Eigen::VectorXd EuclideanManifold::project_tangent_impl(
    const Point&, const Eigen::VectorXd& w) const {
  return w;
}

}  // namespace rnewton
