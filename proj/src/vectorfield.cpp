#include "rnewton/vectorfield.hpp"

#include <cmath>
#include <limits>

namespace rnewton {

double default_fd_step() {
  return std::cbrt(std::numeric_limits<double>::epsilon());
}

TangentVector eval(const VectorField& X, const Point& p) {
  X.manifold->check_owns(p);
  if (!X.in_domain(p)) {
    throw DomainError("vector field evaluated outside its domain");
  }
  TangentVector out = X.eval_fn(p);
  if (!same_point(out.base, p)) {
    throw BasePointMismatch("vector field returned a vector at the wrong base point");
  }
  return out;
}

namespace {

// One full FD pass at step h; returns false if any probe leaves Ω.
bool try_fd_columns(const VectorField& X, const Point& p,
                    const std::vector<TangentVector>& frame, double h,
                    Eigen::MatrixXd& out) {
  const Manifold& M = *X.manifold;
  const int d = static_cast<int>(frame.size());
  std::vector<TangentVector> cols;
  cols.reserve(d);
  for (int j = 0; j < d; ++j) {
    TangentVector dir = frame[j];
    dir.components *= h;
    const Point qp = M.exp_map(p, dir);
    dir.components *= -1.0;
    const Point qm = M.exp_map(p, dir);
    if (!X.in_domain(qp) || !X.in_domain(qm)) return false;
    const TangentVector back_p = M.transport_inverse(p, qp, X.eval_fn(qp));
    const TangentVector back_m = M.transport_inverse(p, qm, X.eval_fn(qm));
    cols.push_back(TangentVector{
        p, (back_p.components - back_m.components) / (2.0 * h)});
  }
  out.resize(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      out(i, j) = M.metric_inner(frame[i], cols[j]);
    }
  }
  return true;
}

}  // namespace

TangentOperator fd_covariant_derivative(const VectorField& X, const Point& p,
                                        double h) {
  const Manifold& M = *X.manifold;
  M.check_owns(p);
  if (!X.in_domain(p)) {
    throw DomainError("fd_covariant_derivative: point outside the field domain");
  }
  if (!(h > 0.0) || h >= M.injectivity_radius(p)) {
    throw InjectivityViolation(
        "fd_covariant_derivative: step must lie in (0, i_p)");
  }
  std::vector<TangentVector> frame = M.orthonormal_frame(p);
  Eigen::MatrixXd mat;
  if (!try_fd_columns(X, p, frame, h, mat) &&
      !try_fd_columns(X, p, frame, h / 10.0, mat)) {
    throw DomainError("fd_covariant_derivative: probes leave the field domain");
  }
  return TangentOperator{p, std::move(mat), std::move(frame)};
}

TangentOperator covariant_derivative(const VectorField& X, const Point& p) {
  X.manifold->check_owns(p);
  if (!X.in_domain(p)) {
    throw DomainError("covariant_derivative: point outside the field domain");
  }
  if (const auto* fn = std::get_if<VectorField::AnalyticFn>(&X.derivative_provider)) {
    return (*fn)(p);
  }
  return fd_covariant_derivative(
      X, p, std::get<VectorField::FiniteDifference>(X.derivative_provider).step);
}

ExpansionResidual expansion_residual(const VectorField& X, const Point& center,
                                     const Point& probe) {
  const Manifold& M = *X.manifold;
  const double d = M.distance(center, probe);
  if (d <= 0.0) {
    throw ResidualUndefined("expansion_residual: probe coincides with the center");
  }
  if (d >= M.injectivity_radius(center)) {
    throw InjectivityViolation("expansion_residual: probe outside the injectivity ball");
  }

  const TangentVector x_probe = eval(X, probe);
  const TangentVector x_center = eval(X, center);
  const TangentOperator deriv = covariant_derivative(X, center);

  const TangentVector log_cp = M.log_map(center, probe);
  const Eigen::VectorXd coeffs = M.to_frame(deriv.frame, log_cp);
  const TangentVector jac_term = M.from_frame(deriv.frame, deriv.matrix * coeffs);

  const TangentVector t0 = M.parallel_transport(center, probe, x_center);
  const TangentVector t1 = M.parallel_transport(center, probe, jac_term);

  TangentVector r{probe,
                  (x_probe.components - t0.components - t1.components) / d};
  return ExpansionResidual{center, probe, std::move(r), d};
}

TangentOperator operator_from_action(
    const Manifold& manifold, const Point& p,
    const std::function<Eigen::VectorXd(const TangentVector&)>& action) {
  std::vector<TangentVector> frame = manifold.orthonormal_frame(p);
  const int d = static_cast<int>(frame.size());
  Eigen::MatrixXd mat(d, d);
  for (int j = 0; j < d; ++j) {
    const TangentVector img{p, action(frame[j])};
    for (int i = 0; i < d; ++i) {
      mat(i, j) = manifold.metric_inner(frame[i], img);
    }
  }
  return TangentOperator{p, std::move(mat), std::move(frame)};
}

}  // namespace rnewton
