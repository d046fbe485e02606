#include "rnewton/analysis.hpp"

#include "rnewton/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace rnewton {

std::string to_string(RateClass c) {
  switch (c) {
    case RateClass::linear: return "linear";
    case RateClass::superlinear: return "superlinear";
    case RateClass::quadratic: return "quadratic";
    case RateClass::inconclusive: return "inconclusive";
  }
  return "unknown";
}

RateClass rate_class_from_string(const std::string& s) {
  if (s == "linear") return RateClass::linear;
  if (s == "superlinear") return RateClass::superlinear;
  if (s == "quadratic") return RateClass::quadratic;
  if (s == "inconclusive") return RateClass::inconclusive;
  throw std::invalid_argument("unknown rate class: " + s);
}

RateReport classify_distances(const std::vector<double>& distances,
                              const RateThresholds& t) {
  RateReport report;
  report.thresholds = t;

  int usable = 0;
  while (usable < static_cast<int>(distances.size()) &&
         std::isfinite(distances[usable]) && distances[usable] >= t.distance_floor) {
    ++usable;
  }
  report.usable_iterations = usable;
  report.floor_truncation_index = usable;

  if (usable < t.min_usable) {
    report.reason = "too few usable iterations above the distance floor (" +
                    std::to_string(usable) + " < " + std::to_string(t.min_usable) + ")";
    return report;
  }

  for (int k = 0; k + 1 < usable; ++k) {
    report.ratios.push_back(distances[k + 1] / distances[k]);
    report.quad_quotients.push_back(distances[k + 1] /
                                    (distances[k] * distances[k]));
  }

  const double q_first = report.ratios.front();
  const double q_last = report.ratios.back();

  const bool superlinear =
      q_last <= q_first / t.q_drop_factor && q_last < t.q_final_max;
  if (superlinear) {
    // Quadratic means the guarantee d_{k+1} <= C d_k² holds across the
    // window: the quotient may not escape upward past the band. Decaying
    // quotients (faster-than-quadratic traces, e.g. from symmetric
    // problems whose Newton map is odd) stay quadratic.
    const double q0 = report.quad_quotients.front();
    const double qmax = *std::max_element(report.quad_quotients.begin(),
                                          report.quad_quotients.end());
    const bool quadratic = q0 > 0.0 && qmax <= t.quad_band_factor * q0;
    report.classification = quadratic ? RateClass::quadratic : RateClass::superlinear;
    report.reason = quadratic ? "ratio decay with bounded quadratic quotient"
                              : "ratio decay with growing quadratic quotient";
    return report;
  }

  // Linear: ratios stabilize around a level c in (q_final_max, 1).
  std::vector<double> sorted = report.ratios;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double c = sorted[sorted.size() / 2];
  if (c > t.q_final_max && c < 1.0) {
    const bool stable = std::all_of(
        report.ratios.begin(), report.ratios.end(),
        [&](double q) { return std::abs(q - c) <= t.linear_band * c; });
    if (stable) {
      report.classification = RateClass::linear;
      report.reason = "ratios stable near " + std::to_string(c);
      return report;
    }
  }
  report.reason = "ratio sequence matches no rate template";
  return report;
}

RateReport classify_rate(const ConvergenceTrace& trace,
                         const RateThresholds& thresholds) {
  for (const IterationRecord& r : trace.records) {
    if (!r.dist_to_solution) {
      RateReport report;
      report.thresholds = thresholds;
      report.reason = "trace carries no distance-to-solution data";
      return report;
    }
  }
  return classify_distances(trace.distances(), thresholds);
}

SpreadEstimate estimate_spread(const Manifold& manifold, const Point& p,
                               double radius, int samples, std::uint64_t seed) {
  manifold.check_owns(p);
  if (!(radius > 0.0) || radius > manifold.injectivity_radius(p)) {
    throw InjectivityViolation("estimate_spread: radius must lie in (0, i_p]");
  }
  if (samples < 1) {
    throw DimensionError("estimate_spread: samples must be >= 1");
  }

  SpreadEstimate out;
  out.base = p;
  out.radius = radius;
  out.samples = samples;
  out.seed = seed;
  out.estimate = 1.0;  // colinear pairs attain d(exp u, exp v) = ‖u−v‖ exactly

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int i = 0; i < samples; ++i) {
    const Point q = random_point_in_ball(manifold, p, radius, rng);
    const std::vector<TangentVector> frame = manifold.orthonormal_frame(q);
    const int d = static_cast<int>(frame.size());

    const Eigen::VectorXd cv = (radius * unif(rng)) * random_unit_coeffs(d, rng);
    // ‖u−v‖ log-uniform over three decades so both near and far pairs
    // appear; u is kept inside the radius ball as well.
    double delta = radius * std::pow(10.0, -3.0 * unif(rng));
    const Eigen::VectorXd w = random_unit_coeffs(d, rng);
    Eigen::VectorXd cu = cv + delta * w;
    while (cu.norm() > radius && delta > 1e-14 * radius) {
      delta *= 0.5;
      cu = cv + delta * w;
    }
    if (!((cu - cv).norm() > 0.0)) continue;

    const Point a = manifold.exp_map(q, manifold.from_frame(frame, cu));
    const Point b = manifold.exp_map(q, manifold.from_frame(frame, cv));
    double ratio = manifold.distance(a, b) / (cu - cv).norm();
    if (std::abs(ratio - 1.0) <= 1e-10) {
      ratio = 1.0;  // below the estimator's own floating-point resolution
    }
    out.estimate = std::max(out.estimate, ratio);
  }
  return out;
}

VectorField holder_field(std::shared_ptr<const Manifold> manifold,
                         const Point& solution, double alpha,
                         const std::optional<TangentVector>& direction) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw DimensionError("holder_field: alpha must lie in (0, 1]");
  }
  const Manifold& M = *manifold;
  TangentVector w0 =
      direction ? *direction : M.orthonormal_frame(solution).front();
  const double wn = M.norm(w0);
  if (wn <= 0.0) throw DimensionError("holder_field: zero direction");
  w0.components /= wn;

  VectorField X;
  X.manifold = manifold;
  Point sol = solution;
  X.eval_fn = [manifold, sol, alpha, w0](const Point& p) {
    const Manifold& m = *manifold;
    const TangentVector to_sol = m.log_map(p, sol);
    const double d = m.norm(to_sol);
    TangentVector out{p, -to_sol.components};
    if (d > 0.0) {
      const TangentVector w = m.parallel_transport(sol, p, w0);
      out.components += std::pow(d, 1.0 + alpha) * w.components;
    }
    return out;
  };
  return X;
}

}  // namespace rnewton
