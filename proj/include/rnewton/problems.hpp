#pragma once

#include "rnewton/analysis.hpp"

#include <filesystem>

namespace rnewton {

struct ProblemStart {
  Point point;
  RateClass expect = RateClass::inconclusive;
};

/// A benchmark problem: manifold, field, optional known singularity, and
/// starting points with the classification each is expected to reproduce
/// under the default NewtonConfig.
struct ProblemSpec {
  std::string name;
  std::shared_ptr<const Manifold> manifold;
  VectorField field;
  std::optional<Point> known_solution;
  std::vector<ProblemStart> starts;
  std::string notes;
  /// Field is smooth near the solution (eligible for contraction and
  /// inverse-bound scans).
  bool smooth = false;
};

/// The built-in registry. Constructed once; immutable afterwards.
const std::vector<ProblemSpec>& builtin_problems();

const ProblemSpec* find_problem(const std::string& name);

/// Loads problems from a JSON file: either one problem object or an
/// array of them. Schema:
///   {"name": ..., "manifold": {"kind", "dim"},
///    "field": {"kind", ...params}, "known_solution": [...],
///    "starts": [{"point": [...], "expect": "quadratic"}]}
/// Field kinds: poly1d {coeffs}, rayleigh {diag|matrix},
/// karcher {anchors}, holder {alpha, solution, direction?}.
std::vector<ProblemSpec> load_problem_file(const std::filesystem::path& path);

/// Parametric field builders shared by the registry and the file loader.
VectorField make_poly1d_field(std::shared_ptr<const Manifold> manifold,
                              std::vector<double> coeffs);
VectorField make_rayleigh_field(std::shared_ptr<const Manifold> sphere,
                                Eigen::MatrixXd a);
VectorField make_karcher_field(std::shared_ptr<const Manifold> manifold,
                               std::vector<Point> anchors);

}  // namespace rnewton
