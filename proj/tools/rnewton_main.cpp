// Command-line harness: runs benchmark problems, writes convergence
// traces and rate reports, and estimates geodesic spread constants.

#include "rnewton/manifolds/factory.hpp"
#include "rnewton/manifolds/spd.hpp"
#include "rnewton/report.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace rnewton;

struct CommonOpts {
  std::string problem;
  std::string problem_file;
  std::string out_dir = ".";
  std::string format = "csv";
  std::string start = "default";
  std::uint64_t seed = 0;
  int max_iters = -1;
  double tol_residual = -1.0;
  double tol_step = -1.0;
  int samples = 1000;
  double radius = 1.0;
  bool verbose = false;
};

NewtonConfig make_config(const CommonOpts& opts) {
  NewtonConfig cfg;
  if (opts.max_iters >= 1) cfg.max_iterations = opts.max_iters;
  if (opts.tol_residual > 0.0) cfg.residual_tolerance = opts.tol_residual;
  if (opts.tol_step > 0.0) cfg.step_tolerance = opts.tol_step;
  return cfg;
}

std::vector<ProblemSpec> selected_problems(const CommonOpts& opts) {
  if (!opts.problem_file.empty()) {
    return load_problem_file(opts.problem_file);
  }
  return builtin_problems();
}

int exit_code_for(Termination t) {
  switch (t) {
    case Termination::residual:
    case Termination::step:
      return 0;
    case Termination::singular:
    case Termination::injectivity_clip_fail:
      return 2;
    case Termination::max_iter:
      return 3;
  }
  return 1;
}

int start_index(const CommonOpts& opts, const ProblemSpec& spec) {
  if (opts.start == "default") return 0;
  const int idx = std::stoi(opts.start);
  if (idx < 0 || idx >= static_cast<int>(spec.starts.size())) {
    throw DomainError("start index out of range for " + spec.name);
  }
  return idx;
}

int cmd_solve(const CommonOpts& opts) {
  const std::vector<ProblemSpec> problems = selected_problems(opts);
  const ProblemSpec* spec = nullptr;
  for (const ProblemSpec& p : problems) {
    if (p.name == opts.problem) spec = &p;
  }
  if (!spec) {
    std::cerr << "unknown problem: " << opts.problem << "\n";
    return 1;
  }
  if (spec->starts.empty()) {
    std::cerr << spec->name << " has no registered starting points\n";
    return 1;
  }

  const int idx = start_index(opts, *spec);
  const NewtonConfig cfg = make_config(opts);
  const ConvergenceTrace trace =
      newton_solve(spec->field, spec->starts[idx].point, cfg, spec->known_solution);
  const RateReport rate = classify_rate(trace);

  const std::filesystem::path dir(opts.out_dir);
  std::filesystem::create_directories(dir);
  write_trace_csv(dir / (spec->name + "_trace.csv"), trace);
  write_report_json(dir / (spec->name + "_report.json"), spec->name, trace, rate);

  if (opts.verbose) {
    for (const IterationRecord& rec : trace.records) {
      std::cout << "k=" << rec.k << " residual=" << fmt17(rec.residual_norm);
      if (rec.dist_to_solution) std::cout << " dist=" << fmt17(*rec.dist_to_solution);
      std::cout << "\n";
    }
  }
  std::cout << spec->name << ": termination=" << to_string(trace.termination)
            << " records=" << trace.records.size()
            << " final_residual=" << fmt17(trace.records.back().residual_norm)
            << " classification=" << to_string(rate.classification) << "\n";
  return exit_code_for(trace.termination);
}

int cmd_spread(const CommonOpts& opts, const std::string& kind_str, int dim) {
  auto manifold = make_manifold(manifold_kind_from_string(kind_str), dim);

  Eigen::VectorXd base = Eigen::VectorXd::Zero(manifold->ambient_dim());
  switch (manifold_kind_from_string(kind_str)) {
    case ManifoldKind::euclidean:
      break;
    case ManifoldKind::sphere:
      base(manifold->ambient_dim() - 1) = 1.0;
      break;
    case ManifoldKind::hyperboloid:
      base(0) = 1.0;
      break;
    case ManifoldKind::spd: {
      auto spd = std::dynamic_pointer_cast<const SpdManifold>(manifold);
      base = spd->to_coords(
          Eigen::MatrixXd::Identity(spd->matrix_size(), spd->matrix_size()));
      break;
    }
  }
  const Point p = manifold->make_point(base);

  SpreadEstimate est;
  try {
    est = estimate_spread(*manifold, p, opts.radius, opts.samples, opts.seed);
  } catch (const InjectivityViolation& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  const std::filesystem::path dir(opts.out_dir);
  std::filesystem::create_directories(dir);
  if (opts.format == "json") {
    write_spread_json(dir / ("spread_" + kind_str + ".json"), manifold->name(), est);
  } else {
    write_spread_csv(dir / ("spread_" + kind_str + ".csv"), manifold->name(), est);
  }
  std::cout << "spread " << manifold->name() << " radius=" << fmt17(est.radius)
            << " samples=" << est.samples << " seed=" << est.seed
            << " estimate=" << fmt17(est.estimate) << "\n";
  return 0;
}

int cmd_suite(const CommonOpts& opts) {
  const std::vector<ProblemSpec> problems = selected_problems(opts);
  const NewtonConfig cfg = make_config(opts);

  std::ostringstream table;
  table << "problem,start,termination,iterations,classification,expected,match\n";
  int mismatches = 0;
  for (const ProblemSpec& spec : problems) {
    for (std::size_t i = 0; i < spec.starts.size(); ++i) {
      const ConvergenceTrace trace =
          newton_solve(spec.field, spec.starts[i].point, cfg, spec.known_solution);
      const RateReport rate = classify_rate(trace);
      const bool match = rate.classification == spec.starts[i].expect;
      if (!match) ++mismatches;
      table << spec.name << ',' << i << ',' << to_string(trace.termination) << ','
            << trace.records.size() - 1 << ',' << to_string(rate.classification)
            << ',' << to_string(spec.starts[i].expect) << ','
            << (match ? "yes" : "no") << '\n';
    }
  }

  const std::filesystem::path dir(opts.out_dir);
  std::filesystem::create_directories(dir);
  {
    const auto path = dir / "suite_summary.csv";
    const auto tmp = path.string() + ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << table.str();
    out.close();
    std::filesystem::rename(tmp, path);
  }
  std::cout << table.str();
  if (mismatches > 0) {
    std::cerr << mismatches << " classification mismatch(es)\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newton's method for vector-field singularities on Riemannian manifolds"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string spread_kind;
  int spread_dim = 3;

  auto add_common = [&opts](CLI::App* cmd) {
    cmd->add_option("--out-dir", opts.out_dir, "output directory");
    cmd->add_option("--format", opts.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", opts.seed, "seed for randomized procedures");
    cmd->add_option("--max-iters", opts.max_iters, "Newton iteration cap");
    cmd->add_option("--tol-residual", opts.tol_residual, "residual tolerance");
    cmd->add_option("--tol-step", opts.tol_step, "step-norm tolerance");
    cmd->add_flag("-v,--verbose", opts.verbose, "per-iteration output");
  };

  CLI::App* solve = app.add_subcommand("solve", "run Newton on one problem");
  solve->add_option("problem,--problem", opts.problem, "problem name");
  solve->add_option("--problem-file", opts.problem_file, "JSON problem file");
  solve->add_option("--start", opts.start, "starting point: 'default' or an index");
  add_common(solve);

  CLI::App* spread = app.add_subcommand("spread", "estimate the geodesic spread constant");
  spread->add_option("manifold", spread_kind,
                     "euclidean | sphere | spd | hyperboloid")->required();
  spread->add_option("--dim", spread_dim,
                     "dimension (sphere: ambient, spd: matrix size, "
                     "hyperboloid: intrinsic)");
  spread->add_option("--radius", opts.radius, "sampling ball radius");
  spread->add_option("--samples", opts.samples, "sample count");
  add_common(spread);

  CLI::App* suite = app.add_subcommand("suite", "run every problem and compare classifications");
  suite->add_option("--problem-file", opts.problem_file, "JSON problem file");
  add_common(suite);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(opts);
    if (spread->parsed()) return cmd_spread(opts, spread_kind, spread_dim);
    if (suite->parsed()) return cmd_suite(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
