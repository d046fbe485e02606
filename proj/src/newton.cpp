#include "rnewton/newton.hpp"

#include "rnewton/sampling.hpp"

#include <cmath>

namespace rnewton {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::residual: return "residual";
    case Termination::step: return "step";
    case Termination::max_iter: return "max_iter";
    case Termination::singular: return "singular";
    case Termination::injectivity_clip_fail: return "injectivity_clip_fail";
  }
  return "unknown";
}

std::vector<double> ConvergenceTrace::distances() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const IterationRecord& r : records) {
    out.push_back(r.dist_to_solution ? *r.dist_to_solution
                                     : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

namespace {

struct SolveStep {
  TangentVector v;
  double taken_norm = 0.0;
  bool singular = false;
  bool clipped = false;
  double inverse_norm = std::numeric_limits<double>::quiet_NaN();
  double condition = std::numeric_limits<double>::quiet_NaN();
};

// Solves ∇X(p) v = −X(p) in the orthonormal frame at p and applies the
// injectivity clip. Shared by newton_step and newton_solve.
SolveStep solve_step(const VectorField& X, const Point& p,
                     const TangentVector& x_p, const TangentOperator& deriv,
                     const NewtonConfig& cfg) {
  const Manifold& M = *X.manifold;
  SolveStep out;
  const OperatorInverse inv = banach_invert(deriv, cfg.pivot_threshold);
  out.condition = inv.condition_estimate;
  if (inv.singular) {
    out.singular = true;
    out.v = M.zero_tangent(p);
    return out;
  }
  out.inverse_norm = inv.inverse_norm;

  const Eigen::VectorXd rhs = -M.to_frame(deriv.frame, x_p);
  Eigen::VectorXd y = inv.inverse->matrix * rhs;
  double vnorm = y.norm();

  const double inj = M.injectivity_radius(p);
  if (cfg.step_clip_to_injectivity && std::isfinite(inj) && vnorm >= inj) {
    y *= 0.99 * inj / vnorm;
    vnorm = 0.99 * inj;
    out.clipped = true;
  }
  out.v = M.from_frame(deriv.frame, y);
  out.taken_norm = vnorm;
  return out;
}

}  // namespace

NewtonStepResult newton_step(const VectorField& X, const Point& p,
                             const NewtonConfig& cfg) {
  const TangentVector x_p = eval(X, p);
  const TangentOperator deriv = covariant_derivative(X, p);
  const SolveStep s = solve_step(X, p, x_p, deriv, cfg);
  NewtonStepResult out;
  out.singular = s.singular;
  out.clipped = s.clipped;
  out.inverse_norm = s.inverse_norm;
  out.condition_estimate = s.condition;
  out.step = s.v;
  out.next = s.singular ? p : X.manifold->exp_map(p, s.v);
  return out;
}

ConvergenceTrace newton_solve(const VectorField& X, const Point& p0,
                              const NewtonConfig& cfg,
                              const std::optional<Point>& known_solution) {
  const Manifold& M = *X.manifold;
  ConvergenceTrace trace;
  Point p = p0;
  bool clipped_prev = false;

  for (int k = 0;; ++k) {
    const TangentVector x_p = eval(X, p);
    const double rnorm = M.norm(x_p);
    const TangentOperator deriv = covariant_derivative(X, p);

    IterationRecord rec;
    rec.k = k;
    rec.point = p;
    rec.residual_norm = rnorm;
    if (known_solution) {
      rec.dist_to_solution = M.distance(p, *known_solution);
    }

    if (rnorm <= cfg.residual_tolerance) {
      const OperatorInverse inv = banach_invert(deriv, cfg.pivot_threshold);
      rec.inverse_norm_estimate =
          inv.singular ? std::numeric_limits<double>::quiet_NaN() : inv.inverse_norm;
      trace.records.push_back(std::move(rec));
      trace.termination = Termination::residual;
      break;
    }

    const SolveStep s = solve_step(X, p, x_p, deriv, cfg);
    rec.inverse_norm_estimate = s.inverse_norm;
    if (s.singular) {
      trace.records.push_back(std::move(rec));
      trace.termination = Termination::singular;
      break;
    }
    if (k >= cfg.max_iterations) {
      trace.records.push_back(std::move(rec));
      trace.termination = Termination::max_iter;
      break;
    }
    rec.step_norm = s.taken_norm;
    rec.clipped = s.clipped;
    trace.records.push_back(std::move(rec));

    if (s.clipped && clipped_prev) {
      trace.termination = Termination::injectivity_clip_fail;
      break;
    }
    clipped_prev = s.clipped;

    p = M.exp_map(p, s.v);

    if (s.taken_norm <= cfg.step_tolerance) {
      IterationRecord last;
      last.k = k + 1;
      last.point = p;
      last.residual_norm = M.norm(eval(X, p));
      if (known_solution) {
        last.dist_to_solution = M.distance(p, *known_solution);
      }
      const OperatorInverse inv =
          banach_invert(covariant_derivative(X, p), cfg.pivot_threshold);
      last.inverse_norm_estimate =
          inv.singular ? std::numeric_limits<double>::quiet_NaN() : inv.inverse_norm;
      trace.records.push_back(std::move(last));
      trace.termination = Termination::step;
      break;
    }
  }

  if (!known_solution) {
    trace.proxy_distance = true;
    const Point& final = trace.records.back().point;
    for (IterationRecord& r : trace.records) {
      r.dist_to_solution = M.distance(r.point, final);
    }
  }
  return trace;
}

InverseBoundReport inverse_bound_scan(const VectorField& X, const Point& solution,
                                      double radius, int samples,
                                      std::uint64_t seed,
                                      const NewtonConfig& cfg) {
  const Manifold& M = *X.manifold;
  const double res = M.norm(eval(X, solution));
  if (res > std::max(cfg.residual_tolerance, 1e-10)) {
    throw DomainError("inverse_bound_scan: the declared solution is not a singularity");
  }
  if (radius >= M.injectivity_radius(solution)) {
    throw InjectivityViolation("inverse_bound_scan: radius exceeds the injectivity radius");
  }
  const OperatorInverse star =
      banach_invert(covariant_derivative(X, solution), cfg.pivot_threshold);
  if (star.singular) {
    throw DomainError("inverse_bound_scan: derivative singular at the solution");
  }

  InverseBoundReport report;
  report.solution_inverse_norm = star.inverse_norm;
  report.seed = seed;

  double r = radius;
  for (int halv = 0; halv <= 20; ++halv) {
    std::vector<double> inv_norms{star.inverse_norm};
    bool ok = true;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < samples && ok; ++i) {
      const Point q = random_point_in_ball(M, solution, r, rng);
      try {
        const OperatorInverse inv =
            banach_invert(covariant_derivative(X, q), cfg.pivot_threshold);
        if (inv.singular || inv.inverse_norm > 2.0 * star.inverse_norm) {
          ok = false;
        } else {
          inv_norms.push_back(inv.inverse_norm);
        }
      } catch (const DomainError&) {
        ok = false;
      }
    }
    report.sample_inverse_norms = std::move(inv_norms);
    report.halvings = halv;
    if (ok) {
      report.certified_radius = r;
      break;
    }
    r *= 0.5;
  }
  double max_norm = 0.0;
  for (double v : report.sample_inverse_norms) max_norm = std::max(max_norm, v);
  report.bound_factor = max_norm / star.inverse_norm;
  return report;
}

}  // namespace rnewton
