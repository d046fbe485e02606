#include "rnewton/manifold.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <limits>

namespace rnewton {

namespace {
std::atomic<std::uint64_t> g_next_tag{1};
}

std::string to_string(CurvatureSign sign) {
  switch (sign) {
    case CurvatureSign::nonnegative: return "nonnegative";
    case CurvatureSign::nonpositive: return "nonpositive";
    case CurvatureSign::mixed: return "mixed";
    case CurvatureSign::flat: return "flat";
  }
  return "unknown";
}

Manifold::Manifold() : tag_(g_next_tag.fetch_add(1)) {}

ManifoldDescriptor Manifold::descriptor() const {
  ManifoldDescriptor d;
  d.intrinsic_dim = intrinsic_dim();
  d.ambient_dim = ambient_dim();
  d.injectivity_radius_fn = [this](const Point& p) { return injectivity_radius(p); };
  d.curvature_sign = curvature_sign();
  return d;
}

void Manifold::check_owns(const Point& p) const {
  if (p.manifold_tag != tag_) {
    throw BasePointMismatch(name() + ": point owned by a different manifold");
  }
  if (p.coords.size() != ambient_dim()) {
    throw BasePointMismatch(name() + ": point has wrong ambient dimension");
  }
}

Point Manifold::make_point(const Eigen::VectorXd& coords) const {
  if (coords.size() != ambient_dim()) {
    throw MembershipError(name() + ": coordinate vector has size " +
                          std::to_string(coords.size()) + ", expected " +
                          std::to_string(ambient_dim()));
  }
  if (!is_point(coords)) {
    throw MembershipError(name() + ": coordinates violate the membership predicate");
  }
  return Point{coords, tag_};
}

Point Manifold::project_point(const Eigen::VectorXd& coords) const {
  if (coords.size() != ambient_dim()) {
    throw MembershipError(name() + ": coordinate vector has wrong size");
  }
  return Point{project_point_impl(coords), tag_};
}

TangentVector Manifold::make_tangent(const Point& base,
                                     const Eigen::VectorXd& components) const {
  check_owns(base);
  if (components.size() != ambient_dim()) {
    throw MembershipError(name() + ": tangent components have wrong size");
  }
  if (!is_tangent(base, components)) {
    throw MembershipError(name() + ": components violate the tangency predicate");
  }
  return TangentVector{base, components};
}

TangentVector Manifold::zero_tangent(const Point& base) const {
  check_owns(base);
  return TangentVector{base, Eigen::VectorXd::Zero(ambient_dim())};
}

TangentVector Manifold::tangent_projection(
    const Point& base, const Eigen::VectorXd& components) const {
  check_owns(base);
  return TangentVector{base, project_tangent_impl(base, components)};
}

double Manifold::metric_inner(const TangentVector& u,
                              const TangentVector& v) const {
  check_owns(u.base);
  check_owns(v.base);
  if (!same_point(u.base, v.base)) {
    throw BasePointMismatch(name() + ": metric_inner requires a common base point");
  }
  return inner_impl(u.base, u.components, v.components);
}

double Manifold::norm(const TangentVector& v) const {
  check_owns(v.base);
  double sq = inner_impl(v.base, v.components, v.components);
  return std::sqrt(std::max(0.0, sq));
}

Point Manifold::exp_map(const Point& p, const TangentVector& v) const {
  check_owns(p);
  if (!same_point(p, v.base)) {
    throw BasePointMismatch(name() + ": exp_map velocity based at a different point");
  }
  if (v.components.isZero(0.0)) {
    return p;  // exact fixed point, no reprojection drift
  }
  return Point{exp_impl(p, v.components), tag_};
}

TangentVector Manifold::log_map(const Point& p, const Point& q) const {
  check_owns(p);
  check_owns(q);
  return TangentVector{p, log_impl(p, q)};
}

TangentVector Manifold::parallel_transport(const Point& p, const Point& q,
                                           const TangentVector& v) const {
  check_owns(p);
  check_owns(q);
  if (!same_point(p, v.base)) {
    throw BasePointMismatch(name() + ": transported vector based at a different point");
  }
  return TangentVector{q, transport_impl(p, q, v.components)};
}

TangentVector Manifold::transport_inverse(const Point& p, const Point& q,
                                          const TangentVector& v_at_q) const {
  // Along the unique minimal geodesic the reverse transport is the inverse.
  return parallel_transport(q, p, v_at_q);
}

std::vector<Eigen::VectorXd> Manifold::frame_candidates(const Point&) const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(ambient_dim());
  for (int i = 0; i < ambient_dim(); ++i) {
    out.push_back(Eigen::VectorXd::Unit(ambient_dim(), i));
  }
  return out;
}

std::vector<TangentVector> Manifold::orthonormal_frame(const Point& p) const {
  check_owns(p);
  const int want = intrinsic_dim();
  std::vector<TangentVector> frame;
  frame.reserve(want);
  for (const Eigen::VectorXd& cand : frame_candidates(p)) {
    if (static_cast<int>(frame.size()) == want) break;
    Eigen::VectorXd t = project_tangent_impl(p, cand);
    // Two Gram-Schmidt passes keep orthogonality near machine precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (const TangentVector& f : frame) {
        t -= inner_impl(p, f.components, t) * f.components;
      }
    }
    double n = std::sqrt(std::max(0.0, inner_impl(p, t, t)));
    if (n > 1e-8) {
      frame.push_back(TangentVector{p, t / n});
    }
  }
  if (static_cast<int>(frame.size()) != want) {
    throw std::logic_error(name() + ": frame candidates failed to span T_pM");
  }
  return frame;
}

Eigen::VectorXd Manifold::to_frame(const std::vector<TangentVector>& frame,
                                   const TangentVector& v) const {
  Eigen::VectorXd coeffs(static_cast<int>(frame.size()));
  for (std::size_t i = 0; i < frame.size(); ++i) {
    coeffs(static_cast<int>(i)) = metric_inner(frame[i], v);
  }
  return coeffs;
}

TangentVector Manifold::from_frame(const std::vector<TangentVector>& frame,
                                   const Eigen::VectorXd& coeffs) const {
  if (frame.empty() || coeffs.size() != static_cast<int>(frame.size())) {
    throw DimensionError(name() + ": frame/coefficient size mismatch");
  }
  Eigen::VectorXd comps = Eigen::VectorXd::Zero(ambient_dim());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    comps += coeffs(static_cast<int>(i)) * frame[i].components;
  }
  return TangentVector{frame.front().base, comps};
}

double operator_norm(const TangentOperator& A) {
  if (A.matrix.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A.matrix);
  return svd.singularValues()(0);
}

OperatorInverse banach_invert(const TangentOperator& B,
                              double pivot_threshold) {
  OperatorInverse out;
  const Eigen::MatrixXd& M = B.matrix;
  const int n = static_cast<int>(M.rows());

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(n - 1);
  out.condition_estimate = (smin > 0.0) ? smax / smin
                                        : std::numeric_limits<double>::infinity();

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pmax = pivots.maxCoeff();
  if (pmax == 0.0 || pivots.minCoeff() < pivot_threshold * pmax) {
    out.singular = true;
    return out;
  }

  TangentOperator inv{B.base, lu.inverse(), B.frame};
  out.inverse_norm = operator_norm(inv);
  out.inverse = std::move(inv);

  const double dev =
      operator_norm({B.base, M - Eigen::MatrixXd::Identity(n, n), B.frame});
  if (dev < 1.0) {
    out.banach_certified = true;
    out.banach_bound = 1.0 / (1.0 - dev);
  }
  return out;
}

bool same_point(const Point& a, const Point& b, double tol) {
  if (a.manifold_tag != b.manifold_tag) return false;
  if (a.coords.size() != b.coords.size()) return false;
  double scale = std::max(1.0, std::max(a.coords.lpNorm<Eigen::Infinity>(),
                                        b.coords.lpNorm<Eigen::Infinity>()));
  return (a.coords - b.coords).lpNorm<Eigen::Infinity>() <= tol * scale;
}

}  // namespace rnewton
