#pragma once

#include "rnewton/manifold.hpp"

namespace rnewton {

/// Unit sphere Sⁿ⁻¹ ⊂ ℝⁿ with the round metric. Injectivity radius is π
/// at every point; sectional curvature is +1.
class SphereManifold final : public Manifold {
 public:
  /// `ambient_dim` = n ≥ 2, giving the sphere S^{n-1}.
  explicit SphereManifold(int ambient_dim);

  std::string name() const override { return "sphere(S^" + std::to_string(ambient_ - 1) + ")"; }
  int intrinsic_dim() const override { return ambient_ - 1; }
  int ambient_dim() const override { return ambient_; }
  double injectivity_radius(const Point& p) const override;
  CurvatureSign curvature_sign() const override { return CurvatureSign::nonnegative; }

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
  int ambient_;
};

}  // namespace rnewton
