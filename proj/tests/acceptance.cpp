// Acceptance suite: end-to-end checks of the solver, the geometry
// kernels, the chart integrators, and the analysis layer, each printed
// as one pass/fail line. Exits nonzero if any criterion fails.

#include "geometry_props.hpp"
#include "stereo_chart.hpp"

#include "rnewton/manifolds/factory.hpp"
#include "rnewton/report.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace rnewton;
using namespace rnewton_tests;

namespace {

#ifndef RNEWTON_CLI_PATH
#define RNEWTON_CLI_PATH "./tools/rnewton"
#endif

struct Harness {
  int failed = 0;

  void run(int number, const std::string& title,
           const std::function<bool(std::string&)>& body,
           double max_seconds = 0.0) {
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && max_seconds > 0.0 && secs > max_seconds) {
      ok = false;
      detail = "runtime budget " + std::to_string(max_seconds) + " s exceeded";
    }
    std::ostringstream line;
    line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << title
         << " (" << std::fixed;
    line.precision(2);
    line << secs << " s)";
    if (!detail.empty()) line << " -- " << detail;
    std::cout << line.str() << std::endl;
    if (!ok) ++failed;
  }
};

std::vector<double> scalar_newton_sqrt2(double x0, double tol, int max_iter) {
  std::vector<double> xs{x0};
  for (int k = 0; k < max_iter; ++k) {
    const double x = xs.back();
    if (std::abs(x * x - 2.0) <= tol) break;
    xs.push_back(x - (x * x - 2.0) / (2.0 * x));
  }
  return xs;
}

std::filesystem::path fresh_out_dir() {
  auto dir = std::filesystem::temp_directory_path() /
             ("rnewton_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, const std::filesystem::path& out_dir) {
  const std::string cmd = std::string(RNEWTON_CLI_PATH) + " " + args +
                          " --out-dir " + out_dir.string() + " > " +
                          (out_dir / "cli_stdout.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  Harness h;
  const std::filesystem::path out_dir = fresh_out_dir();

  // 1 -----------------------------------------------------------------
  h.run(1, "euclid-sqrt2 matches the classical scalar Newton oracle", [&](std::string& detail) {
    const int cli_exit = run_cli("solve euclid-sqrt2", out_dir);
    if (cli_exit != 0) {
      detail = "CLI solve exited with " + std::to_string(cli_exit);
      return false;
    }
    const ProblemSpec* spec = find_problem("euclid-sqrt2");
    const ConvergenceTrace trace =
        newton_solve(spec->field, spec->starts[0].point, {}, spec->known_solution);
    const std::vector<double> oracle = scalar_newton_sqrt2(1.0, 1e-12, 100);
    if (trace.records.size() != oracle.size() || trace.records.size() > 6) {
      detail = "iterate count mismatch";
      return false;
    }
    for (std::size_t k = 0; k < oracle.size(); ++k) {
      if (std::abs(trace.records[k].point.coords(0) - oracle[k]) > 1e-12) {
        detail = "iterate " + std::to_string(k) + " deviates";
        return false;
      }
    }
    if (std::abs(trace.final_point().coords(0) - std::sqrt(2.0)) > 1e-12) {
      detail = "did not converge to sqrt(2)";
      return false;
    }
    detail = std::to_string(trace.records.size()) + " iterates, residual " +
             fmt17(trace.records.back().residual_norm);
    return trace.termination == Termination::residual;
  }, 1.0);

  // 2 -----------------------------------------------------------------
  h.run(2, "geometry property suite, 1000 seeded triples per manifold", [&](std::string& detail) {
    struct Entry { ManifoldKind kind; int dim; };
    double worst_iso = 0.0, worst_exp = 0.0, worst_comp = 0.0, worst_speed = 0.0;
    for (const Entry& e :
         {Entry{ManifoldKind::sphere, 3}, Entry{ManifoldKind::sphere, 10},
          Entry{ManifoldKind::spd, 2}, Entry{ManifoldKind::spd, 5},
          Entry{ManifoldKind::hyperboloid, 2}, Entry{ManifoldKind::euclidean, 5}}) {
      auto m = make_manifold(e.kind, e.dim);
      const PropertyStats s = run_geometry_properties(*m, 1000, 987654321u);
      worst_iso = std::max(worst_iso, s.isometry);
      worst_exp = std::max(worst_exp, s.exp_log);
      worst_comp = std::max(worst_comp, s.composition);
      worst_speed = std::max(worst_speed, s.speed);
      if (s.isometry > 1e-10 || s.exp_log > 1e-9 || s.composition > 1e-9 ||
          s.speed > 1e-9) {
        detail = m->name() + " violates a tolerance";
        return false;
      }
    }
    std::ostringstream ss;
    ss << "max errors: isometry " << worst_iso << ", exp/log " << worst_exp
       << ", composition " << worst_comp << ", speed " << worst_speed;
    detail = ss.str();
    return true;
  }, 30.0);

  // 3 -----------------------------------------------------------------
  h.run(3, "chart integrators agree with the closed-form sphere kernel (100 cases)", [&](std::string& detail) {
    auto s2 = make_manifold(ManifoldKind::sphere, 3);
    const ChartSpec spec = stereo_chart_spec();
    std::mt19937_64 rng(555);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      Eigen::Vector3d praw;
      do {
        for (int i = 0; i < 3; ++i) praw(i) = gauss(rng);
        praw.normalize();
      } while (praw(2) < 0.5);
      const Point P = s2->project_point(praw);
      const TangentVector V = random_tangent_with_norm(*s2, P, 0.5, rng);
      const TangentVector U = random_tangent_with_norm(*s2, P, 1.0, rng);

      const Point Q = s2->exp_map(P, V);
      const TangentVector Uq = s2->parallel_transport(P, Q, U);

      const Eigen::Vector2d x0 = stereo_to_chart(P.coords);
      const Eigen::Vector2d xv = stereo_push(P.coords, V.components);
      const Eigen::Vector2d xu = stereo_push(P.coords, U.components);

      const GeodesicEnd end = geodesic_integrate(spec, x0, xv, 1.0);
      worst = std::max(worst,
                       (end.position - stereo_to_chart(Q.coords)).norm());
      const Eigen::VectorXd moved = transport_integrate(spec, x0, xv, xu, 1.0);
      worst = std::max(
          worst,
          (moved - Eigen::VectorXd(stereo_push(Q.coords, Uq.components))).norm());
      const Eigen::VectorXd lg =
          chart_log(spec, x0, Eigen::VectorXd(stereo_to_chart(Q.coords)));
      worst = std::max(worst, (lg - Eigen::VectorXd(xv)).norm());
      if (worst > 1e-6) {
        detail = "case " + std::to_string(t) + " error " + fmt17(worst);
        return false;
      }
    }
    detail = "worst deviation " + fmt17(worst);
    return true;
  }, 60.0);

  // 4 -----------------------------------------------------------------
  h.run(4, "smooth problems certify quadratic (hence superlinear) convergence", [&](std::string& detail) {
    for (const char* name : {"rayleigh-s2", "karcher-spd2", "karcher-h2"}) {
      const ProblemSpec* spec = find_problem(name);
      const ConvergenceTrace trace =
          newton_solve(spec->field, spec->starts[0].point, {}, spec->known_solution);
      const RateReport rate = classify_rate(trace);
      if (rate.classification != RateClass::quadratic) {
        detail = std::string(name) + " classified " + to_string(rate.classification);
        return false;
      }
      if (!(rate.ratios.back() <= rate.ratios.front() / 10.0) ||
          !(rate.ratios.back() < 0.05)) {
        detail = std::string(name) + " ratio decay too weak";
        return false;
      }
    }
    return true;
  });

  // 5 -----------------------------------------------------------------
  h.run(5, "Hölder fields: superlinear without Lipschitz, quadratic at alpha = 1", [&](std::string& detail) {
    for (const char* name : {"holder-euclid-a05", "holder-euclid-a075",
                             "holder-sphere-a05", "holder-sphere-a075"}) {
      const ProblemSpec* spec = find_problem(name);
      const RateReport rate = classify_rate(newton_solve(
          spec->field, spec->starts[0].point, {}, spec->known_solution));
      if (rate.classification != RateClass::superlinear) {
        detail = std::string(name) + " classified " + to_string(rate.classification);
        return false;
      }
      if (!(rate.quad_quotients.back() >= 2.0 * rate.quad_quotients.front())) {
        detail = std::string(name) + " quadratic quotient did not grow 2x";
        return false;
      }
    }
    for (const char* name : {"holder-euclid-a10", "holder-sphere-a10"}) {
      const ProblemSpec* spec = find_problem(name);
      const RateReport rate = classify_rate(newton_solve(
          spec->field, spec->starts[0].point, {}, spec->known_solution));
      if (rate.classification != RateClass::quadratic) {
        detail = std::string(name) + " classified " + to_string(rate.classification);
        return false;
      }
    }
    return true;
  });

  // 6 -----------------------------------------------------------------
  h.run(6, "strict half-contraction on 50 seeded starts per smooth problem", [&](std::string& detail) {
    const double start_dist = 1e-3;
    for (const ProblemSpec& spec : builtin_problems()) {
      if (!spec.smooth) continue;
      const Manifold& m = *spec.manifold;
      std::mt19937_64 rng(20260811u);
      for (int s = 0; s < 50; ++s) {
        const Point p0 = m.exp_map(
            *spec.known_solution,
            random_tangent_with_norm(m, *spec.known_solution, start_dist, rng));
        const ConvergenceTrace trace =
            newton_solve(spec.field, p0, {}, spec.known_solution);
        if (trace.termination != Termination::residual &&
            trace.termination != Termination::step) {
          detail = spec.name + " start " + std::to_string(s) + " terminated " +
                   to_string(trace.termination);
          return false;
        }
        for (std::size_t k = 0; k < trace.records.size(); ++k) {
          const double dk = *trace.records[k].dist_to_solution;
          if (dk > start_dist * (1.0 + 1e-9)) {
            detail = spec.name + " left the starting ball (d = " + fmt17(dk) + ")";
            return false;
          }
          if (k + 1 < trace.records.size() && dk >= 1e-13) {
            const double dn = *trace.records[k + 1].dist_to_solution;
            if (!(dn < 0.5 * dk)) {
              detail = spec.name + " violated the half-contraction at k = " +
                       std::to_string(k);
              return false;
            }
          }
        }
      }
    }
    return true;
  });

  // 7 -----------------------------------------------------------------
  h.run(7, "inverse-norm bound certifies a positive radius on smooth problems", [&](std::string& detail) {
    for (const ProblemSpec& spec : builtin_problems()) {
      if (!spec.smooth) continue;
      const InverseBoundReport report =
          inverse_bound_scan(spec.field, *spec.known_solution, 0.1, 200, 7);
      if (!report.certified_radius) {
        detail = spec.name + ": no certified radius after 20 halvings";
        return false;
      }
      if (!(*report.certified_radius > 0.0) ||
          report.bound_factor < 1.0 - 1e-9 || report.bound_factor > 2.0) {
        detail = spec.name + ": certified radius or factor out of range";
        return false;
      }
    }
    return true;
  });

  // 8 -----------------------------------------------------------------
  h.run(8, "geodesic spread constants: flat exact, sphere at 1, hyperbolic near sinh(1)", [&](std::string& detail) {
    const int cli_exit = run_cli("spread euclidean --dim 3 --format json", out_dir);
    if (cli_exit != 0) {
      detail = "CLI spread exited with " + std::to_string(cli_exit);
      return false;
    }
    std::ifstream in(out_dir / "spread_euclidean.json");
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("estimate").get<double>() != 1.0) {
      detail = "euclidean estimate " + fmt17(j.at("estimate").get<double>());
      return false;
    }

    auto s2 = make_manifold(ManifoldKind::sphere, 3);
    const Point pole = s2->make_point((Eigen::VectorXd(3) << 0, 0, 1).finished());
    const SpreadEstimate sph = estimate_spread(*s2, pole, 1.0, 1000, 7);
    if (!(sph.estimate >= 1.0 && sph.estimate <= 1.0 + 1e-9)) {
      detail = "sphere estimate " + fmt17(sph.estimate);
      return false;
    }

    auto h2 = make_manifold(ManifoldKind::hyperboloid, 2);
    const Point o = h2->make_point((Eigen::VectorXd(3) << 1, 0, 0).finished());
    const SpreadEstimate hyp = estimate_spread(*h2, o, 1.0, 5000, 7);
    if (!(hyp.estimate >= 1.10 && hyp.estimate <= 1.18)) {
      detail = "hyperboloid estimate " + fmt17(hyp.estimate);
      return false;
    }
    detail = "hyperboloid estimate " + fmt17(hyp.estimate) + " vs sinh(1) = " +
             fmt17(std::sinh(1.0));
    return true;
  });

  // 9 -----------------------------------------------------------------
  h.run(9, "first-order expansion residual decays toward the singularity", [&](std::string& detail) {
    const ProblemSpec* spec = find_problem("rayleigh-s2");
    const Manifold& m = *spec->manifold;
    const Point& center = *spec->known_solution;
    const TangentVector dir =
        m.make_tangent(center, (Eigen::VectorXd(3) << 0.6, 0.8, 0.0).finished());
    double prev = std::numeric_limits<double>::infinity();
    std::ostringstream ss;
    for (double d : {1e-2, 1e-3, 1e-4}) {
      TangentVector step = dir;
      step.components *= d;
      const ExpansionResidual r =
          expansion_residual(spec->field, center, m.exp_map(center, step));
      const double rn = m.norm(r.residual);
      ss << " " << fmt17(rn);
      if (!(rn < prev)) {
        detail = "residual did not decrease at d = " + fmt17(d);
        return false;
      }
      prev = rn;
    }
    detail = "residual norms:" + ss.str();
    return true;
  });

  // 10 ----------------------------------------------------------------
  h.run(10, "finite differences agree with analytic derivatives and decay at order 2", [&](std::string& detail) {
    for (const ProblemSpec& spec : builtin_problems()) {
      if (!spec.field.has_analytic_derivative()) continue;
      std::vector<Point> where{spec.starts[0].point};
      if (spec.known_solution) where.push_back(*spec.known_solution);
      for (const Point& p : where) {
        const TangentOperator exact = covariant_derivative(spec.field, p);
        const TangentOperator fd = fd_covariant_derivative(spec.field, p, 1e-4);
        const double err = (fd.matrix - exact.matrix).cwiseAbs().maxCoeff();
        if (err > 1e-6) {
          detail = spec.name + ": FD deviates by " + fmt17(err);
          return false;
        }
      }
      // order check at the start point, where the field is smooth
      const TangentOperator exact = covariant_derivative(spec.field, spec.starts[0].point);
      const double e1 = (fd_covariant_derivative(spec.field, spec.starts[0].point, 1e-3)
                             .matrix - exact.matrix).norm();
      const double e2 = (fd_covariant_derivative(spec.field, spec.starts[0].point, 5e-4)
                             .matrix - exact.matrix).norm();
      if (e1 > 1e-10) {  // skip when FD is exact and errors are pure rounding
        const double ratio = e1 / e2;
        if (!(ratio >= 2.5 && ratio <= 6.0)) {
          detail = spec.name + ": halving ratio " + fmt17(ratio);
          return false;
        }
      }
    }
    return true;
  });

  std::error_code ec;
  std::filesystem::remove_all(out_dir, ec);

  if (h.failed > 0) {
    std::cout << h.failed << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all acceptance criteria passed" << std::endl;
  return 0;
}
