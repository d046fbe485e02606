#include "rnewton/manifolds/spd.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace rnewton {

namespace {

struct SqrtPair {
  Eigen::MatrixXd half;      // p^{1/2}
  Eigen::MatrixXd inv_half;  // p^{-1/2}
};

SqrtPair spd_sqrts(const Eigen::MatrixXd& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p);
  Eigen::VectorXd lam = eig.eigenvalues();
  for (int i = 0; i < lam.size(); ++i) {
    if (lam(i) <= 0.0) {
      throw MembershipError("spd: matrix square root of a non-positive eigenvalue");
    }
    lam(i) = std::max(lam(i), 1e-300);
  }
  const Eigen::MatrixXd& U = eig.eigenvectors();
  return {U * lam.cwiseSqrt().asDiagonal() * U.transpose(),
          U * lam.cwiseSqrt().cwiseInverse().asDiagonal() * U.transpose()};
}

Eigen::MatrixXd expm_sym(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  return eig.eigenvectors() * eig.eigenvalues().array().exp().matrix().asDiagonal() *
         eig.eigenvectors().transpose();
}

Eigen::MatrixXd logm_sym(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  Eigen::VectorXd lam = eig.eigenvalues();
  for (int i = 0; i < lam.size(); ++i) {
    if (lam(i) <= 0.0) {
      throw MembershipError("spd: matrix log of a non-positive eigenvalue");
    }
    lam(i) = std::max(lam(i), 1e-300);
  }
  return eig.eigenvectors() * lam.array().log().matrix().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

SpdManifold::SpdManifold(int n) : n_(n) {
  if (n < 1 || n * n > 1024) {
    throw DimensionError("spd: matrix size must be in [1, 32]");
  }
}

double SpdManifold::injectivity_radius(const Point& p) const {
  check_owns(p);
  return std::numeric_limits<double>::infinity();
}

Eigen::MatrixXd SpdManifold::to_matrix(const Eigen::VectorXd& coords) const {
  return Eigen::Map<const Eigen::MatrixXd>(coords.data(), n_, n_);
}

Eigen::VectorXd SpdManifold::to_coords(const Eigen::MatrixXd& m) const {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), n_ * n_);
}

bool SpdManifold::is_point(const Eigen::VectorXd& coords, double tol) const {
  if (coords.size() != n_ * n_ || !coords.allFinite()) return false;
  Eigen::MatrixXd m = to_matrix(coords);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  return eig.eigenvalues().minCoeff() > 0.0;
}

bool SpdManifold::is_tangent(const Point&, const Eigen::VectorXd& components,
                             double tol) const {
  if (components.size() != n_ * n_ || !components.allFinite()) return false;
  Eigen::MatrixXd m = to_matrix(components);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

double SpdManifold::distance(const Point& p, const Point& q) const {
  check_owns(p);
  check_owns(q);
  const SqrtPair s = spd_sqrts(to_matrix(p.coords));
  return logm_sym(s.inv_half * to_matrix(q.coords) * s.inv_half).norm();
}

double SpdManifold::inner_impl(const Point& p, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& v) const {
  Eigen::MatrixXd pm = to_matrix(p.coords);
  Eigen::LLT<Eigen::MatrixXd> llt(pm);
  Eigen::MatrixXd pu = llt.solve(to_matrix(u));
  Eigen::MatrixXd pv = llt.solve(to_matrix(v));
  return (pu * pv).trace();
}

Eigen::VectorXd SpdManifold::exp_impl(const Point& p,
                                      const Eigen::VectorXd& v) const {
  const SqrtPair s = spd_sqrts(to_matrix(p.coords));
  Eigen::MatrixXd inner = s.inv_half * to_matrix(v) * s.inv_half;
  Eigen::MatrixXd out = s.half * expm_sym(0.5 * (inner + inner.transpose())) * s.half;
  return to_coords(0.5 * (out + out.transpose()));
}

Eigen::VectorXd SpdManifold::log_impl(const Point& p, const Point& q) const {
  const SqrtPair s = spd_sqrts(to_matrix(p.coords));
  Eigen::MatrixXd inner = s.inv_half * to_matrix(q.coords) * s.inv_half;
  Eigen::MatrixXd out = s.half * logm_sym(0.5 * (inner + inner.transpose())) * s.half;
  return to_coords(0.5 * (out + out.transpose()));
}

Eigen::VectorXd SpdManifold::transport_impl(const Point& p, const Point& q,
                                            const Eigen::VectorXd& v) const {
  // E = p^{1/2} expm(S/2) p^{-1/2} with S = logm(p^{-1/2} q p^{-1/2});
  // transport along the geodesic is v -> E v Eᵀ.
  const SqrtPair s = spd_sqrts(to_matrix(p.coords));
  Eigen::MatrixXd inner = s.inv_half * to_matrix(q.coords) * s.inv_half;
  Eigen::MatrixXd S = logm_sym(0.5 * (inner + inner.transpose()));
  Eigen::MatrixXd E = s.half * expm_sym(0.5 * S) * s.inv_half;
  Eigen::MatrixXd out = E * to_matrix(v) * E.transpose();
  return to_coords(0.5 * (out + out.transpose()));
}

Eigen::VectorXd SpdManifold::project_point_impl(
    const Eigen::VectorXd& coords) const {
  Eigen::MatrixXd m = to_matrix(coords);
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(1e-12);
  return to_coords(eig.eigenvectors() * lam.asDiagonal() *
                   eig.eigenvectors().transpose());
}

Eigen::VectorXd SpdManifold::project_tangent_impl(
    const Point&, const Eigen::VectorXd& w) const {
  Eigen::MatrixXd m = to_matrix(w);
  return to_coords(0.5 * (m + m.transpose()));
}

std::vector<Eigen::VectorXd> SpdManifold::frame_candidates(const Point&) const {
  // Symmetric basis: E_ii, then (E_ij + E_ji)/sqrt(2) for i < j.
  std::vector<Eigen::VectorXd> out;
  out.reserve(intrinsic_dim());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n_; ++i) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    m(i, i) = 1.0;
    out.push_back(to_coords(m));
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
      m(i, j) = m(j, i) = inv_sqrt2;
      out.push_back(to_coords(m));
    }
  }
  return out;
}

}  // namespace rnewton
