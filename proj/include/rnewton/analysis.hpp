#pragma once

#include "rnewton/newton.hpp"

namespace rnewton {

enum class RateClass { linear, superlinear, quadratic, inconclusive };

std::string to_string(RateClass c);
RateClass rate_class_from_string(const std::string& s);

/// Finite-sample stand-ins for the asymptotic rate definitions, which
/// have no direct test on a truncated trace; the conventions are
/// explicit and configuration-visible.
struct RateThresholds {
  /// Superlinear requires q_last ≤ q_first / q_drop_factor ...
  double q_drop_factor = 10.0;
  /// ... and q_last below this.
  double q_final_max = 0.05;
  /// Quadratic additionally requires max/min of d_{k+1}/d_k² within this.
  double quad_band_factor = 10.0;
  /// Linear requires all ratios within ±linear_band·c of a level c.
  double linear_band = 0.1;
  /// Iterations with d below this floor are ignored (floating point
  /// destroys ratio estimates there).
  double distance_floor = 1e-13;
  /// Minimum usable distances for any non-inconclusive verdict.
  int min_usable = 4;
};

struct RateReport {
  RateClass classification = RateClass::inconclusive;
  /// q_k = d_{k+1}/d_k over usable iterations.
  std::vector<double> ratios;
  /// d_{k+1}/d_k² over usable iterations.
  std::vector<double> quad_quotients;
  int usable_iterations = 0;
  /// Index of the first distance below the floor (== count of usable
  /// leading distances).
  int floor_truncation_index = 0;
  std::string reason;
  RateThresholds thresholds;
};

/// Classifies a distance sequence d_k = d(p_k, p_*).
RateReport classify_distances(const std::vector<double>& distances,
                              const RateThresholds& thresholds = {});

/// Classifies a trace via its recorded (known or proxy) distances.
RateReport classify_rate(const ConvergenceTrace& trace,
                         const RateThresholds& thresholds = {});

/// Sampled estimate of the geodesic spread constant
/// K_p = sup d(exp_q u, exp_q v)/‖u−v‖ over q ∈ B_radius(p) and tangent
/// pairs with ‖v‖, ‖u‖, ‖u−v‖ ≤ radius. A sampled max never exceeds the
/// sup; the colinear pair attains 1 exactly, so the estimate is ≥ 1.
struct SpreadEstimate {
  Point base;
  double radius = 0.0;
  int samples = 0;
  double estimate = 1.0;
  std::uint64_t seed = 0;
};

SpreadEstimate estimate_spread(const Manifold& manifold, const Point& p,
                               double radius, int samples, std::uint64_t seed);

/// Test field X(p) = −log_p(p_*) + ‖log_p(p_*)‖^{1+α} · w(p) with w the
/// parallel transport of a fixed unit direction from p_*. X(p_*) = 0 and
/// ∇X(p_*) = I, but for α < 1 the derivative is Hölder rather than
/// Lipschitz at p_*: Newton converges superlinearly, not quadratically.
VectorField holder_field(std::shared_ptr<const Manifold> manifold,
                         const Point& solution, double alpha,
                         const std::optional<TangentVector>& direction = {});

}  // namespace rnewton
