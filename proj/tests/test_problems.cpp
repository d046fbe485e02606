#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rnewton/manifolds/factory.hpp"
#include "rnewton/manifolds/spd.hpp"
#include "rnewton/problems.hpp"

#include <cmath>
#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>

using namespace rnewton;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& body) {
    path = std::filesystem::temp_directory_path() /
           ("rnewton_problems_XXXXXX" + std::to_string(::getpid()) + ".json");
    std::ofstream out(path);
    out << body;
  }
  ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
};

}  // namespace

TEST_CASE("registry lists the required problem families") {
  for (const char* name :
       {"euclid-sqrt2", "rayleigh-s2", "karcher-spd2", "karcher-spd2-commuting",
        "karcher-h2", "holder-euclid-a05", "holder-euclid-a075",
        "holder-euclid-a10", "holder-sphere-a05", "holder-sphere-a075",
        "holder-sphere-a10", "rayleigh-s2-chart"}) {
    CAPTURE(name);
    CHECK(find_problem(name) != nullptr);
  }
  CHECK(find_problem("no-such-problem") == nullptr);
}

TEST_CASE("lookup values: known solutions") {
  const ProblemSpec* ray = find_problem("rayleigh-s2");
  REQUIRE(ray != nullptr);
  REQUIRE(ray->known_solution.has_value());
  CHECK((ray->known_solution->coords -
         (Eigen::VectorXd(3) << 0.0, 0.0, 1.0).finished())
            .norm() == 0.0);

  const ProblemSpec* sqrt2 = find_problem("euclid-sqrt2");
  REQUIRE(sqrt2 != nullptr);
  CHECK(sqrt2->known_solution->coords(0) == doctest::Approx(std::sqrt(2.0)));

  // commuting-anchor closed form: geometric mean of I and e²·I is e·I
  const ProblemSpec* comm = find_problem("karcher-spd2-commuting");
  REQUIRE(comm != nullptr);
  auto spd = std::dynamic_pointer_cast<const SpdManifold>(comm->manifold);
  REQUIRE(spd);
  const Eigen::MatrixXd mean = spd->to_matrix(comm->known_solution->coords);
  CHECK((mean - std::exp(1.0) * Eigen::Matrix2d::Identity()).norm() < 1e-14);
}

TEST_CASE("every known solution passes the singularity check at load time") {
  for (const ProblemSpec& spec : builtin_problems()) {
    CAPTURE(spec.name);
    REQUIRE(spec.known_solution.has_value());
    CHECK(spec.manifold->norm(eval(spec.field, *spec.known_solution)) <= 1e-10);
    const OperatorInverse inv =
        banach_invert(covariant_derivative(spec.field, *spec.known_solution));
    CHECK_FALSE(inv.singular);
  }
}

TEST_CASE("each registered start reproduces its expected classification") {
  for (const ProblemSpec& spec : builtin_problems()) {
    for (std::size_t i = 0; i < spec.starts.size(); ++i) {
      CAPTURE(spec.name);
      const ConvergenceTrace trace =
          newton_solve(spec.field, spec.starts[i].point, {}, spec.known_solution);
      const RateReport rate = classify_rate(trace);
      CHECK(rate.classification == spec.starts[i].expect);
      for (const IterationRecord& rec : trace.records) {
        CHECK(spec.manifold->is_point(rec.point.coords));
      }
    }
  }
}

TEST_CASE("manifold descriptors expose consistent shape data") {
  for (const ProblemSpec& spec : builtin_problems()) {
    const ManifoldDescriptor d = spec.manifold->descriptor();
    CHECK(d.intrinsic_dim >= 1);
    CHECK(d.intrinsic_dim <= d.ambient_dim);
    REQUIRE(spec.known_solution.has_value());
    CHECK(d.injectivity_radius_fn(*spec.known_solution) > 0.0);
  }
}

TEST_CASE("problem files load (object, array, empty) and solve") {
  TempFile single(R"({
    "name": "file-sqrt3",
    "manifold": {"kind": "euclidean", "dim": 1},
    "field": {"kind": "poly1d", "coeffs": [-3.0, 0.0, 1.0]},
    "known_solution": [1.7320508075688772],
    "starts": [{"point": [1.0], "expect": "quadratic"}]
  })");
  const std::vector<ProblemSpec> loaded = load_problem_file(single.path);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].name == "file-sqrt3");
  const ConvergenceTrace trace = newton_solve(
      loaded[0].field, loaded[0].starts.at(0).point, {}, loaded[0].known_solution);
  CHECK(trace.termination == Termination::residual);
  CHECK(trace.final_point().coords(0) == doctest::Approx(std::sqrt(3.0)));
  CHECK(classify_rate(trace).classification == loaded[0].starts[0].expect);

  TempFile empty("[]");
  CHECK(load_problem_file(empty.path).empty());

  TempFile pair(R"([
    {"name": "a", "manifold": {"kind": "euclidean", "dim": 1},
     "field": {"kind": "poly1d", "coeffs": [-2.0, 0.0, 1.0]}},
    {"name": "b", "manifold": {"kind": "sphere", "dim": 3},
     "field": {"kind": "rayleigh", "diag": [1.0, 2.0, 3.0]}}
  ])");
  CHECK(load_problem_file(pair.path).size() == 2);

  CHECK_THROWS_AS(load_problem_file("/no/such/file.json"), DomainError);

  TempFile badkind(R"({"name": "x", "manifold": {"kind": "euclidean", "dim": 1},
                       "field": {"kind": "mystery"}})");
  CHECK_THROWS_AS(load_problem_file(badkind.path), DimensionError);
}

TEST_CASE("file-loaded karcher and holder fields work end to end") {
  TempFile karcher(R"({
    "name": "file-karcher-h2",
    "manifold": {"kind": "hyperboloid", "dim": 2},
    "field": {"kind": "karcher",
              "anchors": [[1.1276259652063807, 0.0, 0.52109530549374738],
                          [1.3374349463048445, 0.888105982187623, 0.0]]},
    "starts": [{"point": [1.0, 0.0, 0.0]}]
  })");
  const std::vector<ProblemSpec> specs = load_problem_file(karcher.path);
  REQUIRE(specs.size() == 1);
  const ConvergenceTrace trace =
      newton_solve(specs[0].field, specs[0].starts.at(0).point);
  CHECK(trace.termination == Termination::residual);

  TempFile holder(R"({
    "name": "file-holder",
    "manifold": {"kind": "euclidean", "dim": 2},
    "field": {"kind": "holder", "alpha": 0.5, "solution": [0.25, -1.0],
              "direction": [0.0, 1.0]}
  })");
  const std::vector<ProblemSpec> hs = load_problem_file(holder.path);
  REQUIRE(hs.size() == 1);
  REQUIRE(hs[0].known_solution.has_value());
  CHECK(hs[0].manifold->norm(eval(hs[0].field, *hs[0].known_solution)) == 0.0);
}

TEST_CASE("rayleigh construction rejects near-degenerate spectra") {
  auto s2 = make_manifold(ManifoldKind::sphere, 3);
  CHECK_THROWS_AS(
      make_rayleigh_field(
          s2, Eigen::MatrixXd(Eigen::Vector3d(1.0, 2.0, 2.0 + 1e-8).asDiagonal())),
      DimensionError);
}

TEST_CASE("karcher anchor count is bounded") {
  auto r2 = make_manifold(ManifoldKind::euclidean, 2);
  std::vector<Point> anchors;
  for (int i = 0; i < 65; ++i) {
    anchors.push_back(r2->make_point((Eigen::VectorXd(2) << i, -i).finished()));
  }
  CHECK_THROWS_AS(make_karcher_field(r2, anchors), DimensionError);
  CHECK_THROWS_AS(make_karcher_field(r2, {}), DimensionError);
}

TEST_CASE("smooth problems are marked for the contraction and bound scans") {
  int smooth_count = 0;
  for (const ProblemSpec& spec : builtin_problems()) {
    if (spec.smooth) ++smooth_count;
    if (spec.name.find("a05") != std::string::npos ||
        spec.name.find("a075") != std::string::npos) {
      CHECK_FALSE(spec.smooth);
    }
  }
  CHECK(smooth_count >= 6);
}
