#pragma once

#include "rnewton/manifold.hpp"

#include <functional>
#include <memory>
#include <variant>

namespace rnewton {

/// Central-difference optimum for first derivatives, cbrt(machine eps).
double default_fd_step();

/// A differentiable vector field X on a manifold together with a
/// covariant-derivative provider (analytic, or transport-based central
/// finite differences as the fallback) and a domain predicate for Ω.
struct VectorField {
  struct FiniteDifference {
    double step = default_fd_step();
  };
  using AnalyticFn = std::function<TangentOperator(const Point&)>;
  using DerivativeProvider = std::variant<FiniteDifference, AnalyticFn>;

  std::shared_ptr<const Manifold> manifold;
  std::function<TangentVector(const Point&)> eval_fn;
  /// Ω predicate; empty means the whole manifold.
  std::function<bool(const Point&)> domain;
  DerivativeProvider derivative_provider = FiniteDifference{};

  bool has_analytic_derivative() const {
    return std::holds_alternative<AnalyticFn>(derivative_provider);
  }
  bool in_domain(const Point& p) const { return !domain || domain(p); }
};

/// First-order expansion data of X around `center`, evaluated at `probe`:
/// residual r(p) with X(p) = P X(p̄) + P ∇X(p̄) log_p̄(p) + d(p,p̄) r(p).
struct ExpansionResidual {
  Point center;
  Point probe;
  TangentVector residual;
  double dist = 0.0;
};

TangentVector eval(const VectorField& X, const Point& p);

/// ∇X(p) as a TangentOperator in the deterministic orthonormal frame at p.
TangentOperator covariant_derivative(const VectorField& X, const Point& p);

/// Transport-pullback central differences: column j approximates
/// [P⁻¹ X(exp_p(h f_j)) − P⁻¹ X(exp_p(−h f_j))] / (2h) in the frame at p.
/// If a probe leaves Ω, h is shrunk once by 10 before giving up.
TangentOperator fd_covariant_derivative(const VectorField& X, const Point& p,
                                        double h);

ExpansionResidual expansion_residual(const VectorField& X, const Point& center,
                                     const Point& probe);

/// Builds the operator matrix of v ↦ action(v) in the orthonormal frame
/// at p. `action` receives a frame vector and returns ambient components
/// of a tangent vector at p.
TangentOperator operator_from_action(
    const Manifold& manifold, const Point& p,
    const std::function<Eigen::VectorXd(const TangentVector&)>& action);

}  // namespace rnewton
