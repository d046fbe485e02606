#pragma once

#include "rnewton/vectorfield.hpp"

#include <optional>

namespace rnewton {

struct NewtonConfig {
  int max_iterations = 100;
  /// Stop when ‖X(p_k)‖ falls below this.
  double residual_tolerance = 1e-12;
  /// Stop when the Newton step norm falls below this.
  double step_tolerance = 1e-14;
  /// Relative pivot below which the linear solve is flagged singular.
  double pivot_threshold = 1e-12;
  /// Scale steps with ‖v‖ ≥ i_p down to 0.99·i_p instead of leaving the
  /// injectivity ball.
  bool step_clip_to_injectivity = true;
};

enum class Termination { residual, step, max_iter, singular, injectivity_clip_fail };

std::string to_string(Termination t);

struct IterationRecord {
  int k = 0;
  Point point;
  double residual_norm = 0.0;
  /// Norm of the step taken from this iterate; NaN on the final record.
  double step_norm = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> dist_to_solution;
  /// ‖∇X(p_k)⁻¹‖ (NaN when the operator was singular).
  double inverse_norm_estimate = std::numeric_limits<double>::quiet_NaN();
  bool clipped = false;
};

struct ConvergenceTrace {
  std::vector<IterationRecord> records;
  Termination termination = Termination::max_iter;
  /// True when distances use d(p_k, p_final) in place of d(p_k, p_*);
  /// valid as a rate proxy once convergence is established.
  bool proxy_distance = false;

  std::vector<double> distances() const;
  const Point& final_point() const { return records.back().point; }
};

struct NewtonStepResult {
  Point next;
  TangentVector step;
  bool singular = false;
  bool clipped = false;
  double inverse_norm = std::numeric_limits<double>::quiet_NaN();
  double condition_estimate = std::numeric_limits<double>::quiet_NaN();
};

/// One application of the Newton iterate mapping
/// p ↦ exp_p(−∇X(p)⁻¹ X(p)), solving the linear system in the
/// orthonormal frame at p.
NewtonStepResult newton_step(const VectorField& X, const Point& p,
                             const NewtonConfig& cfg = {});

/// Full iteration with residual/step/iteration-cap/singularity guards.
/// When `known_solution` is given, per-iterate distances to it are
/// recorded; otherwise distances to the final iterate are filled in as a
/// proxy.
ConvergenceTrace newton_solve(const VectorField& X, const Point& p0,
                              const NewtonConfig& cfg = {},
                              const std::optional<Point>& known_solution = {});

struct InverseBoundReport {
  double solution_inverse_norm = 0.0;
  /// ‖∇X(q)⁻¹‖ over the sampled ball; the solution itself is sample 0.
  std::vector<double> sample_inverse_norms;
  /// max sample / solution value, ≥ 1 since the solution is included.
  double bound_factor = 1.0;
  /// Largest tested radius at which every sample satisfied the factor-2
  /// bound; empty when 20 halvings never produced one.
  std::optional<double> certified_radius;
  int halvings = 0;
  std::uint64_t seed = 0;
};

/// Samples ‖∇X⁻¹‖ on geodesic balls around a declared solution and
/// certifies a radius on which the factor-2 inverse bound holds, halving
/// the radius up to 20 times. Does not assert the bound at the input
/// radius: only existence of some certified radius is claimed.
InverseBoundReport inverse_bound_scan(const VectorField& X, const Point& solution,
                                      double radius, int samples,
                                      std::uint64_t seed = 0,
                                      const NewtonConfig& cfg = {});

}  // namespace rnewton
