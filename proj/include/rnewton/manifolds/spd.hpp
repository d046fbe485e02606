#pragma once

#include "rnewton/manifold.hpp"

namespace rnewton {

/// Symmetric positive-definite n×n matrices with the affine-invariant
/// metric ⟨u,v⟩_p = tr(p⁻¹ u p⁻¹ v). A Hadamard manifold: the injectivity
/// radius is +∞ everywhere and log/transport are globally defined.
///
/// Points and tangents are stored as column-major flattened n×n arrays;
/// tangent vectors are symmetric matrices.
class SpdManifold final : public Manifold {
 public:
  explicit SpdManifold(int n);

  std::string name() const override { return "spd(" + std::to_string(n_) + ")"; }
  int intrinsic_dim() const override { return n_ * (n_ + 1) / 2; }
  int ambient_dim() const override { return n_ * n_; }
  double injectivity_radius(const Point& p) const override;
  CurvatureSign curvature_sign() const override { return CurvatureSign::nonpositive; }

  bool is_point(const Eigen::VectorXd& coords, double tol) const override;
  bool is_tangent(const Point& p, const Eigen::VectorXd& components,
                  double tol) const override;
  double distance(const Point& p, const Point& q) const override;

  int matrix_size() const { return n_; }
  Eigen::MatrixXd to_matrix(const Eigen::VectorXd& coords) const;
  Eigen::VectorXd to_coords(const Eigen::MatrixXd& m) const;

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
  std::vector<Eigen::VectorXd> frame_candidates(const Point& p) const override;

 private:
  int n_;
};

}  // namespace rnewton
