#pragma once

#include "rnewton/types.hpp"

#include <functional>
#include <optional>

namespace rnewton {

class Manifold;

/// Compact summary of a manifold's shape data. intrinsic_dim never
/// exceeds ambient_dim and the injectivity radius is strictly positive
/// at every valid point.
struct ManifoldDescriptor {
  int intrinsic_dim = 0;
  int ambient_dim = 0;
  std::function<double(const Point&)> injectivity_radius_fn;
  CurvatureSign curvature_sign = CurvatureSign::mixed;
};

/// Abstract Riemannian manifold kernel.
///
/// Concrete kernels supply the metric, exponential/logarithm maps,
/// parallel transport along minimal geodesics, distance, and the
/// injectivity radius. Instances are immutable after construction and
/// safe for concurrent read access; every operation is a pure function
/// of its inputs.
class Manifold {
 public:
  Manifold();
  virtual ~Manifold() = default;
  Manifold(const Manifold&) = delete;
  Manifold& operator=(const Manifold&) = delete;

  /// Membership/tangency tolerance shared by all kernels.
  static constexpr double kMembershipTol = 1e-10;

  std::uint64_t tag() const { return tag_; }

  virtual std::string name() const = 0;
  virtual int intrinsic_dim() const = 0;
  virtual int ambient_dim() const = 0;
  virtual double injectivity_radius(const Point& p) const = 0;
  virtual CurvatureSign curvature_sign() const = 0;

  ManifoldDescriptor descriptor() const;

  virtual bool is_point(const Eigen::VectorXd& coords,
                        double tol = kMembershipTol) const = 0;
  virtual bool is_tangent(const Point& p, const Eigen::VectorXd& components,
                          double tol = kMembershipTol) const = 0;

  /// Validates membership and stamps the owning tag.
  Point make_point(const Eigen::VectorXd& coords) const;
  /// Re-projection helper (normalize, symmetrize+clamp, ...) applied after
  /// maps that drift off the manifold.
  Point project_point(const Eigen::VectorXd& coords) const;

  TangentVector make_tangent(const Point& base,
                             const Eigen::VectorXd& components) const;
  TangentVector zero_tangent(const Point& base) const;
  /// Projects arbitrary ambient components onto T_pM.
  TangentVector tangent_projection(const Point& base,
                                   const Eigen::VectorXd& components) const;

  double metric_inner(const TangentVector& u, const TangentVector& v) const;
  double norm(const TangentVector& v) const;

  Point exp_map(const Point& p, const TangentVector& v) const;
  TangentVector log_map(const Point& p, const Point& q) const;
  TangentVector parallel_transport(const Point& p, const Point& q,
                                   const TangentVector& v) const;
  /// Inverse transport: maps a vector at q back to p along the same
  /// geodesic (P_{γ,b,a} = P^{-1}_{γ,a,b}).
  TangentVector transport_inverse(const Point& p, const Point& q,
                                  const TangentVector& v_at_q) const;
  virtual double distance(const Point& p, const Point& q) const = 0;

  /// Deterministic orthonormal basis of T_pM (Gram-Schmidt over a fixed
  /// candidate set), reproducible across runs.
  std::vector<TangentVector> orthonormal_frame(const Point& p) const;

  /// Coordinates of v in an orthonormal frame.
  Eigen::VectorXd to_frame(const std::vector<TangentVector>& frame,
                           const TangentVector& v) const;
  TangentVector from_frame(const std::vector<TangentVector>& frame,
                           const Eigen::VectorXd& coeffs) const;

  void check_owns(const Point& p) const;

 protected:
  virtual double inner_impl(const Point& p, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& v) const = 0;
  virtual Eigen::VectorXd exp_impl(const Point& p,
                                   const Eigen::VectorXd& v) const = 0;
  virtual Eigen::VectorXd log_impl(const Point& p, const Point& q) const = 0;
  virtual Eigen::VectorXd transport_impl(const Point& p, const Point& q,
                                         const Eigen::VectorXd& v) const = 0;
  virtual Eigen::VectorXd project_point_impl(
      const Eigen::VectorXd& coords) const = 0;
  virtual Eigen::VectorXd project_tangent_impl(
      const Point& p, const Eigen::VectorXd& w) const = 0;
  /// Ambient candidate directions fed to Gram-Schmidt; default is the
  /// canonical ambient basis.
  virtual std::vector<Eigen::VectorXd> frame_candidates(const Point& p) const;

 private:
  std::uint64_t tag_;
};

/// ‖A‖ = sup{‖Av‖ : ‖v‖=1}; with an orthonormal frame this is the
/// spectral norm of the coefficient matrix.
double operator_norm(const TangentOperator& A);

struct OperatorInverse {
  bool singular = false;
  /// sigma_max / sigma_min of the input matrix.
  double condition_estimate = 0.0;
  /// Spectral norm of the inverse (when nonsingular).
  double inverse_norm = 0.0;
  /// True when ‖B − I‖ < 1, in which case `banach_bound` carries the
  /// guaranteed bound 1/(1 − ‖B − I‖) on ‖B⁻¹‖.
  bool banach_certified = false;
  double banach_bound = 0.0;
  std::optional<TangentOperator> inverse;
};

/// Inverts a tangent operator with a Banach-lemma certificate when
/// ‖B − I‖ < 1. Factorization uses dense partial pivoting; the result is
/// flagged singular when the relative pivot falls below `pivot_threshold`.
OperatorInverse banach_invert(const TangentOperator& B,
                              double pivot_threshold = 1e-12);

/// Same owning manifold and coordinates within tol (relative to scale).
bool same_point(const Point& a, const Point& b, double tol = 1e-10);

}  // namespace rnewton
