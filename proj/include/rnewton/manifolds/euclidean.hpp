#pragma once

#include "rnewton/manifold.hpp"

namespace rnewton {

/// Flat ℝⁿ: exp is addition, transport is the identity on components.
/// Recovers the classical Newton iteration when used with the solver.
class EuclideanManifold final : public Manifold {
 public:
  explicit EuclideanManifold(int dim);

  std::string name() const override { return "euclidean(" + std::to_string(dim_) + ")"; }
  int intrinsic_dim() const override { return dim_; }
  int ambient_dim() const override { return dim_; }
  double injectivity_radius(const Point& p) const override;
  CurvatureSign curvature_sign() const override { return CurvatureSign::flat; }

  bool is_point(const Eigen::VectorXd& coords, double tol) const override;
  bool is_tangent(const Point& p, const Eigen::VectorXd& components,
                  double tol) const override;
  double distance(const Point& p, const Point& q) const override;

 protected:
  double inner_impl(const Point& p, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v) const override;
  Eigen::VectorXd exp_impl(const Point& p, const Eigen::VectorXd& v) const override;
  Eigen::VectorXd log_impl(const Point& p, const Point& q) const override;
  Eigen::VectorXd transport_impl(const Point& p, const Point& q,
                                 const Eigen::VectorXd& v) const override;
  Eigen::VectorXd project_point_impl(const Eigen::VectorXd& coords) const override;
  Eigen::VectorXd project_tangent_impl(const Point& p,
                                       const Eigen::VectorXd& w) const override;

 private:
  int dim_;
};

}  // namespace rnewton
