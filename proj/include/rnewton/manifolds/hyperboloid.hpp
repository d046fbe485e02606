#pragma once

#include "rnewton/manifold.hpp"

namespace rnewton {

/// Hyperbolic space Hⁿ in the hyperboloid model: points p ∈ ℝⁿ⁺¹ with
/// ⟨p,p⟩_M = −1 and p₀ > 0, where ⟨·,·⟩_M is the Minkowski form of
/// signature (−,+,…,+). A Hadamard manifold (curvature −1, i_p = +∞).
class HyperboloidManifold final : public Manifold {
 public:
  /// `intrinsic_dim` = n ≥ 1; the ambient representation has n+1 coords.
  explicit HyperboloidManifold(int intrinsic_dim);

  std::string name() const override { return "hyperboloid(H^" + std::to_string(dim_) + ")"; }
  int intrinsic_dim() const override { return dim_; }
  int ambient_dim() const override { return dim_ + 1; }
  double injectivity_radius(const Point& p) const override;
  CurvatureSign curvature_sign() const override { return CurvatureSign::nonpositive; }

  bool is_point(const Eigen::VectorXd& coords, double tol) const override;
  bool is_tangent(const Point& p, const Eigen::VectorXd& components,
                  double tol) const override;
  double distance(const Point& p, const Point& q) const override;

  static double minkowski(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

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
