#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rnewton/manifolds/factory.hpp"
#include "rnewton/manifolds/spd.hpp"
#include "rnewton/problems.hpp"
#include "rnewton/sampling.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <thread>

using namespace rnewton;

namespace {

Eigen::VectorXd vecd(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Classical scalar Newton oracle for x² − 2.
std::vector<double> scalar_newton_sqrt2(double x0, double tol, int max_iter) {
  std::vector<double> xs{x0};
  for (int k = 0; k < max_iter; ++k) {
    const double x = xs.back();
    if (std::abs(x * x - 2.0) <= tol) break;
    xs.push_back(x - (x * x - 2.0) / (2.0 * x));
  }
  return xs;
}

}  // namespace

TEST_CASE("newton_step: scalar arithmetic and the fixed point") {
  auto line = make_manifold(ManifoldKind::euclidean, 1);
  VectorField poly = make_poly1d_field(line, {-2.0, 0.0, 1.0});
  const NewtonStepResult step = newton_step(poly, line->make_point(vecd({1.0})));
  CHECK_FALSE(step.singular);
  CHECK(step.next.coords(0) == doctest::Approx(1.5).epsilon(1e-15));

  // at a singularity with nonsingular derivative: v = 0 and next == p exactly
  auto s2 = make_manifold(ManifoldKind::sphere, 3);
  VectorField ray = make_rayleigh_field(
      s2, Eigen::MatrixXd(Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal()));
  const Point top = s2->make_point(vecd({0.0, 0.0, 1.0}));
  const NewtonStepResult fixed = newton_step(ray, top);
  CHECK(s2->norm(fixed.step) == 0.0);
  CHECK(fixed.next.coords == top.coords);
}

TEST_CASE("newton_step: quadratic contraction toward the eigenvector") {
  auto s2 = make_manifold(ManifoldKind::sphere, 3);
  VectorField ray = make_rayleigh_field(
      s2, Eigen::MatrixXd(Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal()));
  const Point top = s2->make_point(vecd({0.0, 0.0, 1.0}));
  const Point p0 = s2->project_point(vecd({0.1, 0.1, 1.0}));
  const NewtonStepResult step = newton_step(ray, p0);
  const double d0 = s2->distance(p0, top);
  const double d1 = s2->distance(step.next, top);
  CHECK(d1 < 0.5 * d0 * d0);
}

TEST_CASE("newton_solve matches the classical scalar oracle iterate-for-iterate") {
  auto line = make_manifold(ManifoldKind::euclidean, 1);
  VectorField poly = make_poly1d_field(line, {-2.0, 0.0, 1.0});
  const ConvergenceTrace trace =
      newton_solve(poly, line->make_point(vecd({1.0})), {},
                   line->make_point(vecd({std::sqrt(2.0)})));

  const std::vector<double> oracle = scalar_newton_sqrt2(1.0, 1e-12, 100);
  CHECK(trace.termination == Termination::residual);
  REQUIRE(trace.records.size() == oracle.size());
  CHECK(trace.records.size() <= 6);
  for (std::size_t k = 0; k < oracle.size(); ++k) {
    CHECK(trace.records[k].point.coords(0) ==
          doctest::Approx(oracle[k]).epsilon(1e-12));
  }
  CHECK(trace.records.back().residual_norm <= 1e-12);
  CHECK(trace.records.back().point.coords(0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("euclidean equivalence holds for a cubic as well") {
  auto line = make_manifold(ManifoldKind::euclidean, 1);
  VectorField poly = make_poly1d_field(line, {-2.0, 0.0, 0.0, 1.0});  // x³ − 2
  const ConvergenceTrace trace = newton_solve(poly, line->make_point(vecd({1.0})));
  double x = 1.0;
  for (const IterationRecord& rec : trace.records) {
    CHECK(rec.point.coords(0) == doctest::Approx(x).epsilon(1e-12));
    if (std::abs(x * x * x - 2.0) <= 1e-12) break;
    x -= (x * x * x - 2.0) / (3.0 * x * x);
  }
  CHECK(trace.records.back().point.coords(0) ==
        doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
}

TEST_CASE("starting at the solution terminates immediately") {
  auto line = make_manifold(ManifoldKind::euclidean, 1);
  VectorField poly = make_poly1d_field(line, {-2.0, 0.0, 1.0});
  const ConvergenceTrace trace =
      newton_solve(poly, line->make_point(vecd({std::sqrt(2.0)})));
  CHECK(trace.termination == Termination::residual);
  CHECK(trace.records.size() == 1);
  CHECK(trace.records[0].k == 0);
}

TEST_CASE("commuting Karcher mean lands on the closed-form midpoint") {
  auto spd2 = std::dynamic_pointer_cast<const SpdManifold>(
      make_manifold(ManifoldKind::spd, 2));
  const Eigen::Matrix2d p1 = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d p2 = std::exp(2.0) * Eigen::Matrix2d::Identity();
  VectorField karcher = make_karcher_field(
      spd2, {spd2->make_point(spd2->to_coords(p1)),
             spd2->make_point(spd2->to_coords(p2))});

  const ConvergenceTrace trace =
      newton_solve(karcher, spd2->make_point(spd2->to_coords(p1)));
  CHECK(trace.termination == Termination::residual);

  // oracle: p1^{1/2} (p1^{-1/2} p2 p1^{-1/2})^{1/2} p1^{1/2}; here p1 = I
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(p2);
  const Eigen::Matrix2d midpoint = eig.eigenvectors() *
                                   eig.eigenvalues().cwiseSqrt().asDiagonal() *
                                   eig.eigenvectors().transpose();
  CHECK((spd2->to_matrix(trace.final_point().coords) - midpoint).norm() < 1e-9);
  CHECK(midpoint(0, 0) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("singular derivative is flagged, not iterated through") {
  auto line = make_manifold(ManifoldKind::euclidean, 1);
  // x² + 1 has derivative 0 at the origin and a nonzero residual there
  VectorField degenerate = make_poly1d_field(line, {1.0, 0.0, 1.0});
  const Point origin = line->make_point(vecd({0.0}));
  const NewtonStepResult step = newton_step(degenerate, origin);
  CHECK_FALSE(std::isfinite(step.condition_estimate));

  const ConvergenceTrace trace = newton_solve(degenerate, origin);
  CHECK(trace.termination == Termination::singular);
  CHECK(trace.records.size() == 1);
}

TEST_CASE("termination reasons: max_iter and step") {
  auto line = make_manifold(ManifoldKind::euclidean, 1);
  VectorField poly = make_poly1d_field(line, {-2.0, 0.0, 1.0});

  NewtonConfig one;
  one.max_iterations = 1;
  const ConvergenceTrace capped =
      newton_solve(poly, line->make_point(vecd({1.0})), one);
  CHECK(capped.termination == Termination::max_iter);
  CHECK(capped.records.size() == 2);

  // with an unreachable residual target the step tolerance fires instead
  NewtonConfig strict;
  strict.residual_tolerance = 0.0;
  const ConvergenceTrace by_step =
      newton_solve(poly, line->make_point(vecd({1.0})), strict);
  CHECK(by_step.termination == Termination::step);
  CHECK(by_step.records.back().point.coords(0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("injectivity clipping fires and double clips abort") {
  auto s2 = make_manifold(ManifoldKind::sphere, 3);
  // synthetic field: unit-norm value with a 0.1-scaled identity derivative
  // makes every Newton step ten units long, far beyond i_p = pi
  VectorField stiff;
  stiff.manifold = s2;
  stiff.eval_fn = [&s2](const Point& p) {
    return s2->orthonormal_frame(p).front();
  };
  stiff.derivative_provider = VectorField::AnalyticFn([&s2](const Point& p) {
    return operator_from_action(*s2, p, [](const TangentVector& v) {
      return Eigen::VectorXd(0.1 * v.components);
    });
  });

  const Point p0 = s2->make_point(vecd({1.0, 0.0, 0.0}));
  const NewtonStepResult step = newton_step(stiff, p0);
  CHECK(step.clipped);
  CHECK(s2->norm(step.step) == doctest::Approx(0.99 * std::numbers::pi));

  const ConvergenceTrace trace = newton_solve(stiff, p0);
  CHECK(trace.termination == Termination::injectivity_clip_fail);
  CHECK(trace.records.size() == 2);  // two consecutive clipped steps

  NewtonConfig noclip;
  noclip.step_clip_to_injectivity = false;
  const NewtonStepResult raw = newton_step(stiff, p0, noclip);
  CHECK_FALSE(raw.clipped);
  CHECK(s2->norm(raw.step) == doctest::Approx(10.0));
}

TEST_CASE("trace bookkeeping: indices, distances, proxy flag") {
  auto line = make_manifold(ManifoldKind::euclidean, 1);
  VectorField poly = make_poly1d_field(line, {-2.0, 0.0, 1.0});

  const ConvergenceTrace with_sol =
      newton_solve(poly, line->make_point(vecd({1.0})), {},
                   line->make_point(vecd({std::sqrt(2.0)})));
  CHECK_FALSE(with_sol.proxy_distance);
  for (std::size_t k = 0; k < with_sol.records.size(); ++k) {
    CHECK(with_sol.records[k].k == static_cast<int>(k));
    REQUIRE(with_sol.records[k].dist_to_solution.has_value());
    CHECK(*with_sol.records[k].dist_to_solution >= 0.0);
  }

  const ConvergenceTrace proxy = newton_solve(poly, line->make_point(vecd({1.0})));
  CHECK(proxy.proxy_distance);
  CHECK(*proxy.records.back().dist_to_solution == 0.0);
  // proxy distances agree with the known-solution ones away from the tail
  for (std::size_t k = 0; k + 2 < proxy.records.size(); ++k) {
    CHECK(*proxy.records[k].dist_to_solution ==
          doctest::Approx(*with_sol.records[k].dist_to_solution).epsilon(1e-6));
  }
}

TEST_CASE("concurrent solves on shared immutable manifolds agree") {
  const ProblemSpec* spec = find_problem("rayleigh-s2");
  REQUIRE(spec != nullptr);
  const ConvergenceTrace reference =
      newton_solve(spec->field, spec->starts[0].point, {}, spec->known_solution);

  std::vector<std::thread> workers;
  std::array<bool, 4> same{};
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      const ConvergenceTrace t =
          newton_solve(spec->field, spec->starts[0].point, {}, spec->known_solution);
      same[w] = t.records.size() == reference.records.size() &&
                (t.final_point().coords - reference.final_point().coords).norm() == 0.0;
    });
  }
  for (std::thread& t : workers) t.join();
  for (bool ok : same) CHECK(ok);
}

TEST_CASE("inverse_bound_scan: constant inverse, empty sample set, Rayleigh") {
  auto r2 = make_manifold(ManifoldKind::euclidean, 2);
  Eigen::Matrix2d a;
  a << 2.0, 1.0, 0.0, -1.5;
  VectorField linear;
  linear.manifold = r2;
  linear.eval_fn = [a](const Point& p) { return TangentVector{p, a * p.coords}; };
  linear.derivative_provider = VectorField::AnalyticFn([r2, a](const Point& p) {
    return operator_from_action(*r2, p, [&](const TangentVector& v) {
      return Eigen::VectorXd(a * v.components);
    });
  });
  const Point origin = r2->make_point(vecd({0.0, 0.0}));

  const InverseBoundReport linear_report =
      inverse_bound_scan(linear, origin, 5.0, 64, 42);
  CHECK(linear_report.bound_factor == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(linear_report.bound_factor >= 1.0 - 1e-9);
  REQUIRE(linear_report.certified_radius.has_value());
  CHECK(*linear_report.certified_radius == 5.0);

  const InverseBoundReport empty = inverse_bound_scan(linear, origin, 1.0, 0, 0);
  CHECK(empty.bound_factor == 1.0);
  CHECK(empty.certified_radius.has_value());

  auto s2 = make_manifold(ManifoldKind::sphere, 3);
  VectorField ray = make_rayleigh_field(
      s2, Eigen::MatrixXd(Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal()));
  const Point top = s2->make_point(vecd({0.0, 0.0, 1.0}));
  const InverseBoundReport ray_report = inverse_bound_scan(ray, top, 0.1, 200, 7);
  CHECK(ray_report.solution_inverse_norm == doctest::Approx(0.5));
  REQUIRE(ray_report.certified_radius.has_value());
  CHECK(*ray_report.certified_radius == 0.1);  // frozen: factor-2 bound holds at 0.1
  CHECK(ray_report.bound_factor >= 1.0 - 1e-9);
  CHECK(ray_report.bound_factor <= 2.0);

  // not a singularity -> precondition error
  CHECK_THROWS_AS(
      (void)inverse_bound_scan(ray, s2->project_point(vecd({0.3, 0.2, 1.0})), 0.1, 8, 1),
      DomainError);
}
