#include "rnewton/problems.hpp"

#include "rnewton/chart.hpp"
#include "rnewton/manifolds/euclidean.hpp"
#include "rnewton/manifolds/factory.hpp"
#include "rnewton/manifolds/hyperboloid.hpp"
#include "rnewton/manifolds/spd.hpp"
#include "rnewton/manifolds/sphere.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <numbers>

namespace rnewton {

namespace {

constexpr int kMaxKarcherAnchors = 64;

Eigen::VectorXd vecd(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

VectorField make_poly1d_field(std::shared_ptr<const Manifold> manifold,
                              std::vector<double> coeffs) {
  if (manifold->ambient_dim() != 1) {
    throw DimensionError("poly1d field requires a 1-dimensional Euclidean manifold");
  }
  auto poly = [coeffs](double x) {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
  };
  auto dpoly = [coeffs](double x) {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;)
      acc = acc * x + static_cast<double>(i) * coeffs[i];
    return acc;
  };

  VectorField X;
  X.manifold = manifold;
  X.eval_fn = [poly](const Point& p) {
    return TangentVector{p, vecd({poly(p.coords(0))})};
  };
  X.derivative_provider = VectorField::AnalyticFn([manifold, dpoly](const Point& p) {
    return operator_from_action(*manifold, p, [&](const TangentVector& v) {
      return Eigen::VectorXd(dpoly(p.coords(0)) * v.components);
    });
  });
  return X;
}

VectorField make_rayleigh_field(std::shared_ptr<const Manifold> sphere,
                                Eigen::MatrixXd a) {
  const int n = sphere->ambient_dim();
  if (a.rows() != n || a.cols() != n) {
    throw DimensionError("rayleigh field: matrix size does not match the sphere");
  }
  a = ((a + a.transpose()) / 2.0).eval();
  // Reject near-degenerate spectra: a multiple eigenvalue makes the
  // covariant derivative singular at the associated eigenvector.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  for (int i = 0; i + 1 < n; ++i) {
    if (eig.eigenvalues()(i + 1) - eig.eigenvalues()(i) <= 1e-6) {
      throw DimensionError("rayleigh field: eigengap below 1e-6");
    }
  }

  VectorField X;
  X.manifold = sphere;
  X.eval_fn = [a](const Point& p) {
    const Eigen::VectorXd ap = a * p.coords;
    return TangentVector{p, 2.0 * (ap - p.coords.dot(ap) * p.coords)};
  };
  X.derivative_provider = VectorField::AnalyticFn([sphere, a](const Point& p) {
    const double lambda = p.coords.dot(a * p.coords);
    return operator_from_action(*sphere, p, [&](const TangentVector& v) {
      const Eigen::VectorXd av = a * v.components;
      return Eigen::VectorXd(2.0 * (av - p.coords.dot(av) * p.coords) -
                             2.0 * lambda * v.components);
    });
  });
  return X;
}

VectorField make_karcher_field(std::shared_ptr<const Manifold> manifold,
                               std::vector<Point> anchors) {
  if (anchors.empty() || static_cast<int>(anchors.size()) > kMaxKarcherAnchors) {
    throw DimensionError("karcher field: anchor count must be in [1, 64]");
  }
  for (const Point& q : anchors) manifold->check_owns(q);

  VectorField X;
  X.manifold = manifold;
  X.eval_fn = [manifold, anchors](const Point& p) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(manifold->ambient_dim());
    for (const Point& q : anchors) {
      acc += manifold->log_map(p, q).components;
    }
    return TangentVector{p, std::move(acc)};
  };

  // Closed-form covariant derivative where the Hessian of d²/2 is known:
  // flat (identity) and constant curvature −1 (radial 1, transverse
  // d·coth d). Elsewhere the finite-difference provider stands in.
  if (std::dynamic_pointer_cast<const EuclideanManifold>(manifold)) {
    const double m = static_cast<double>(anchors.size());
    X.derivative_provider = VectorField::AnalyticFn([manifold, m](const Point& p) {
      return operator_from_action(*manifold, p, [&](const TangentVector& v) {
        return Eigen::VectorXd(-m * v.components);
      });
    });
  } else if (std::dynamic_pointer_cast<const HyperboloidManifold>(manifold)) {
    X.derivative_provider =
        VectorField::AnalyticFn([manifold, anchors](const Point& p) {
          return operator_from_action(*manifold, p, [&](const TangentVector& v) {
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(manifold->ambient_dim());
            for (const Point& q : anchors) {
              const TangentVector lg = manifold->log_map(p, q);
              const double d = manifold->norm(lg);
              if (d < 1e-12) {
                acc -= v.components;
                continue;
              }
              const Eigen::VectorXd u = lg.components / d;
              const double radial =
                  HyperboloidManifold::minkowski(v.components, u);
              const double t = d / std::tanh(d);
              acc -= radial * u + t * (v.components - radial * u);
            }
            return acc;
          });
        });
  }
  return X;
}

namespace {

// --- stereographic chart of S² (projection from the south pole) ---------

Eigen::Vector2d stereo_project(const Eigen::Vector3d& p) {
  return Eigen::Vector2d(p(0), p(1)) / (1.0 + p(2));
}

Eigen::Vector3d stereo_unproject(const Eigen::Vector2d& x) {
  const double s = 1.0 + x.squaredNorm();
  return Eigen::Vector3d(2.0 * x(0) / s, 2.0 * x(1) / s,
                         (1.0 - x.squaredNorm()) / s);
}

Eigen::Vector2d stereo_push(const Eigen::Vector3d& p, const Eigen::Vector3d& v) {
  const double t = 1.0 + p(2);
  return Eigen::Vector2d(v(0) * t - p(0) * v(2), v(1) * t - p(1) * v(2)) / (t * t);
}

Eigen::Vector3d stereo_pull(const Eigen::Vector2d& x, const Eigen::Vector2d& w) {
  const double s = 1.0 + x.squaredNorm();
  const double xw = x.dot(w);
  Eigen::Vector3d out;
  out.head<2>() = 2.0 * w / s - 4.0 * xw * x / (s * s);
  out(2) = -4.0 * xw / (s * s);
  return out;
}

ChartSpec stereo_sphere_chart() {
  ChartSpec spec;
  spec.dim = 2;
  spec.metric = [](const Eigen::VectorXd& x) {
    const double s = 1.0 + x.squaredNorm();
    return Eigen::MatrixXd(4.0 / (s * s) * Eigen::Matrix2d::Identity());
  };
  // Conformal metric λ δ_ij with log √λ = ln 2 − ln(1+r²):
  // Γ^k_{ij} = δ_ki u_j + δ_kj u_i − δ_ij u_k, u = −2x/(1+r²).
  spec.christoffel = [](const Eigen::VectorXd& x) {
    const Eigen::Vector2d u = -2.0 * x / (1.0 + x.squaredNorm());
    std::vector<Eigen::MatrixXd> gamma(2, Eigen::MatrixXd::Zero(2, 2));
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          double g = 0.0;
          if (k == i) g += u(j);
          if (k == j) g += u(i);
          if (i == j) g -= u(k);
          gamma[k](i, j) = g;
        }
      }
    }
    return gamma;
  };
  spec.domain = [](const Eigen::VectorXd& x) { return x.squaredNorm() < 9.0; };
  return spec;
}

VectorField make_chart_rayleigh_field(std::shared_ptr<const ChartManifold> chart,
                                      const Eigen::Matrix3d& a) {
  auto sphere_field = [a](const Eigen::Vector3d& p) {
    const Eigen::Vector3d ap = a * p;
    return Eigen::Vector3d(2.0 * (ap - p.dot(ap) * p));
  };
  auto sphere_deriv = [a](const Eigen::Vector3d& p, const Eigen::Vector3d& v) {
    const Eigen::Vector3d av = a * v;
    const double lambda = p.dot(a * p);
    return Eigen::Vector3d(2.0 * (av - p.dot(av) * p) - 2.0 * lambda * v);
  };

  VectorField X;
  X.manifold = chart;
  X.domain = [chart](const Point& p) { return chart->spec().domain(p.coords); };
  X.eval_fn = [sphere_field](const Point& p) {
    const Eigen::Vector3d sp = stereo_unproject(p.coords.head<2>());
    return TangentVector{p, stereo_push(sp, sphere_field(sp))};
  };
  // The chart metric is the stereographic pullback of the round metric,
  // so the pushforward of the sphere covariant derivative is exact.
  X.derivative_provider =
      VectorField::AnalyticFn([chart, sphere_deriv](const Point& p) {
        const Eigen::Vector2d x = p.coords.head<2>();
        const Eigen::Vector3d sp = stereo_unproject(x);
        return operator_from_action(*chart, p, [&](const TangentVector& f) {
          const Eigen::Vector3d vs = stereo_pull(x, f.components.head<2>());
          return Eigen::VectorXd(stereo_push(sp, sphere_deriv(sp, vs)));
        });
      });
  return X;
}

// Adds the closed-form derivative for the Hölder field on flat space:
// ∇X(x)v = v + (1+α)‖e‖^{α−1}⟨e,v⟩ w with e = x − x_*.
void set_euclidean_holder_derivative(VectorField& X, const Point& solution,
                                     double alpha, const TangentVector& w0) {
  std::shared_ptr<const Manifold> m = X.manifold;
  const Point sol = solution;
  X.derivative_provider =
      VectorField::AnalyticFn([m, sol, alpha, w0](const Point& p) {
        const Eigen::VectorXd e = p.coords - sol.coords;
        const double d = e.norm();
        return operator_from_action(*m, p, [&](const TangentVector& v) {
          Eigen::VectorXd out = v.components;
          if (d > 0.0) {
            out += (1.0 + alpha) * std::pow(d, alpha - 1.0) *
                   e.dot(v.components) * w0.components;
          }
          return out;
        });
      });
}

ProblemSpec holder_problem(std::shared_ptr<const Manifold> manifold,
                           const std::string& name, double alpha,
                           const Point& solution, const TangentVector& w0,
                           const Point& start) {
  ProblemSpec spec;
  spec.name = name;
  spec.manifold = manifold;
  spec.field = holder_field(manifold, solution, alpha, w0);
  if (std::dynamic_pointer_cast<const EuclideanManifold>(manifold)) {
    set_euclidean_holder_derivative(spec.field, solution, alpha, w0);
  }
  spec.known_solution = solution;
  spec.starts.push_back(
      {start, alpha < 1.0 ? RateClass::superlinear : RateClass::quadratic});
  spec.smooth = alpha >= 1.0;
  spec.notes = "derivative is Hölder-α at the solution; Lipschitz only for α = 1";
  return spec;
}

std::vector<ProblemSpec> build_registry() {
  std::vector<ProblemSpec> reg;

  // --- euclid-sqrt2 ------------------------------------------------------
  {
    auto line = make_manifold(ManifoldKind::euclidean, 1);
    ProblemSpec spec;
    spec.name = "euclid-sqrt2";
    spec.manifold = line;
    spec.field = make_poly1d_field(line, {-2.0, 0.0, 1.0});
    spec.known_solution = line->make_point(vecd({std::sqrt(2.0)}));
    spec.starts.push_back({line->make_point(vecd({1.0})), RateClass::quadratic});
    spec.smooth = true;
    spec.notes = "scalar x² − 2; coincides with the textbook Newton iteration";
    reg.push_back(std::move(spec));
  }

  // --- rayleigh-s2 -------------------------------------------------------
  auto sphere3 = make_manifold(ManifoldKind::sphere, 3);
  {
    Eigen::MatrixXd a = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
    ProblemSpec spec;
    spec.name = "rayleigh-s2";
    spec.manifold = sphere3;
    spec.field = make_rayleigh_field(sphere3, a);
    spec.known_solution = sphere3->make_point(vecd({0.0, 0.0, 1.0}));
    spec.starts.push_back(
        {sphere3->project_point(vecd({0.3, 0.3, 1.0})), RateClass::quadratic});
    spec.smooth = true;
    spec.notes = "Rayleigh-quotient gradient on S²; singularity at the top eigenvector";
    reg.push_back(std::move(spec));
  }

  // --- karcher-spd2 (non-commuting anchors) ------------------------------
  auto spd2 = std::dynamic_pointer_cast<const SpdManifold>(
      make_manifold(ManifoldKind::spd, 2));
  {
    std::vector<Point> anchors;
    Eigen::Matrix2d a1, a2, a3;
    a1 << 20.0, 5.0, 5.0, 2.0;
    a2 << 0.05, -0.02, -0.02, 8.0;
    a3 << 1.0, 0.95, 0.95, 1.0;
    anchors.push_back(spd2->make_point(spd2->to_coords(a1)));
    anchors.push_back(spd2->make_point(spd2->to_coords(a2)));
    anchors.push_back(spd2->make_point(spd2->to_coords(a3)));

    ProblemSpec spec;
    spec.name = "karcher-spd2";
    spec.manifold = spd2;
    spec.field = make_karcher_field(spd2, std::move(anchors));
    // Mean of the three anchors, converged to residual < 1e-14 and frozen.
    Eigen::Matrix2d mean;
    mean << 0.86061415121900509, 0.46771301126909354,
            0.46771301126909354, 1.2256610533545291;
    spec.known_solution = spd2->make_point(spd2->to_coords(mean));
    Eigen::Matrix2d start;
    start << 40.0, 0.0, 0.0, 0.1;
    spec.starts.push_back(
        {spd2->make_point(spd2->to_coords(start)), RateClass::quadratic});
    spec.smooth = true;
    spec.notes = "Karcher mean of three well-separated SPD(2) anchors";
    reg.push_back(std::move(spec));
  }

  // --- karcher-spd2-commuting ---------------------------------------------
  {
    std::vector<Point> anchors;
    anchors.push_back(
        spd2->make_point(spd2->to_coords(Eigen::Matrix2d::Identity())));
    anchors.push_back(spd2->make_point(
        spd2->to_coords(std::exp(2.0) * Eigen::Matrix2d::Identity())));

    ProblemSpec spec;
    spec.name = "karcher-spd2-commuting";
    spec.manifold = spd2;
    spec.field = make_karcher_field(spd2, std::move(anchors));
    spec.known_solution = spd2->make_point(
        spd2->to_coords(std::exp(1.0) * Eigen::Matrix2d::Identity()));
    // The field is radial about the mean, so one Newton step lands on it:
    // too few iterations for any rate verdict.
    spec.starts.push_back(
        {spd2->make_point(spd2->to_coords(Eigen::Matrix2d::Identity())),
         RateClass::inconclusive});
    spec.smooth = true;
    spec.notes = "commuting anchors; the mean is the closed-form geometric midpoint";
    reg.push_back(std::move(spec));
  }

  // --- karcher-h2 ----------------------------------------------------------
  {
    auto h2 = make_manifold(ManifoldKind::hyperboloid, 2);
    const Point origin = h2->make_point(vecd({1.0, 0.0, 0.0}));
    const Point q1 =
        h2->exp_map(origin, h2->make_tangent(origin, vecd({0.0, 1.0, 0.3})));
    const Point q2 =
        h2->exp_map(origin, h2->make_tangent(origin, vecd({0.0, -0.8, 0.5})));
    TangentVector half = h2->log_map(q1, q2);
    half.components *= 0.5;
    const Point midpoint = h2->exp_map(q1, half);
    // Start off the connecting geodesic: along it the two-anchor field is
    // affine in arclength and Newton hits the midpoint in one step.
    const auto mid_frame = h2->orthonormal_frame(midpoint);
    Eigen::VectorXd axis = h2->to_frame(mid_frame, h2->log_map(midpoint, q2));
    axis.normalize();
    const Eigen::Vector2d normal(-axis(1), axis(0));
    const Point start =
        h2->exp_map(midpoint, h2->from_frame(mid_frame, 1.5 * normal));

    ProblemSpec spec;
    spec.name = "karcher-h2";
    spec.manifold = h2;
    spec.field = make_karcher_field(h2, {q1, q2});
    spec.known_solution = midpoint;
    spec.starts.push_back({start, RateClass::quadratic});
    spec.smooth = true;
    spec.notes = "two-anchor Karcher mean on H²: the geodesic midpoint";
    reg.push_back(std::move(spec));
  }

  // --- holder families -----------------------------------------------------
  {
    auto line = make_manifold(ManifoldKind::euclidean, 1);
    const Point sol = line->make_point(vecd({0.5}));
    const TangentVector w0 = line->make_tangent(sol, vecd({1.0}));
    const Point start = line->make_point(vecd({0.8}));
    reg.push_back(holder_problem(line, "holder-euclid-a05", 0.5, sol, w0, start));
    reg.push_back(holder_problem(line, "holder-euclid-a075", 0.75, sol, w0, start));
    reg.push_back(holder_problem(line, "holder-euclid-a10", 1.0, sol, w0, start));
  }
  {
    const Point sol = sphere3->make_point(vecd({0.0, 0.0, 1.0}));
    const TangentVector w0 = sphere3->make_tangent(sol, vecd({1.0, 0.0, 0.0}));
    const Point start = sphere3->exp_map(
        sol, sphere3->make_tangent(sol, vecd({0.3 * 0.6, 0.3 * 0.8, 0.0})));
    reg.push_back(
        holder_problem(sphere3, "holder-sphere-a05", 0.5, sol, w0, start));
    reg.push_back(
        holder_problem(sphere3, "holder-sphere-a075", 0.75, sol, w0, start));
    reg.push_back(
        holder_problem(sphere3, "holder-sphere-a10", 1.0, sol, w0, start));
  }

  // --- rayleigh-s2-chart ----------------------------------------------------
  {
    auto chart = std::make_shared<const ChartManifold>(
        stereo_sphere_chart(), OdeSettings{}, std::numbers::pi,
        CurvatureSign::nonnegative, "stereo-sphere-chart");
    const Eigen::Matrix3d a = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();

    ProblemSpec spec;
    spec.name = "rayleigh-s2-chart";
    spec.manifold = chart;
    spec.field = make_chart_rayleigh_field(chart, a);
    spec.known_solution = chart->make_point(vecd({0.0, 0.0}));
    const Eigen::Vector3d start_sphere =
        Eigen::Vector3d(0.3, 0.3, 1.0).normalized();
    spec.starts.push_back(
        {chart->make_point(stereo_project(start_sphere)), RateClass::quadratic});
    spec.smooth = true;
    spec.notes = "Rayleigh field pushed through the stereographic chart; "
                 "geodesics and transports run through the ODE kernels";
    reg.push_back(std::move(spec));
  }

  return reg;
}

}  // namespace

const std::vector<ProblemSpec>& builtin_problems() {
  static const std::vector<ProblemSpec> registry = build_registry();
  return registry;
}

const ProblemSpec* find_problem(const std::string& name) {
  for (const ProblemSpec& p : builtin_problems()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

namespace {

using nlohmann::json;

Eigen::VectorXd vec_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<int>(j.size()));
  int i = 0;
  for (const auto& x : j) v(i++) = x.get<double>();
  return v;
}

ProblemSpec problem_from_json(const json& j) {
  ProblemSpec spec;
  spec.name = j.at("name").get<std::string>();
  const json& jm = j.at("manifold");
  const ManifoldKind kind =
      manifold_kind_from_string(jm.at("kind").get<std::string>());
  auto manifold = make_manifold(kind, jm.at("dim").get<int>());
  spec.manifold = manifold;

  const json& jf = j.at("field");
  const std::string fkind = jf.at("kind").get<std::string>();
  if (fkind == "poly1d") {
    spec.field = make_poly1d_field(manifold, jf.at("coeffs").get<std::vector<double>>());
  } else if (fkind == "rayleigh") {
    Eigen::MatrixXd a;
    if (jf.contains("diag")) {
      a = Eigen::MatrixXd(vec_from_json(jf.at("diag")).asDiagonal());
    } else {
      const json& rows = jf.at("matrix");
      a.resize(static_cast<int>(rows.size()), static_cast<int>(rows.size()));
      int r = 0;
      for (const auto& row : rows) {
        a.row(r++) = vec_from_json(row).transpose();
      }
    }
    spec.field = make_rayleigh_field(manifold, a);
  } else if (fkind == "karcher") {
    std::vector<Point> anchors;
    for (const auto& anchor : jf.at("anchors")) {
      anchors.push_back(manifold->make_point(vec_from_json(anchor)));
    }
    spec.field = make_karcher_field(manifold, std::move(anchors));
  } else if (fkind == "holder") {
    const double alpha = jf.at("alpha").get<double>();
    const Point sol = manifold->make_point(vec_from_json(jf.at("solution")));
    std::optional<TangentVector> dir;
    if (jf.contains("direction")) {
      dir = manifold->make_tangent(sol, vec_from_json(jf.at("direction")));
    }
    spec.field = holder_field(manifold, sol, alpha, dir);
    spec.known_solution = sol;
  } else {
    throw DimensionError("unknown field kind: " + fkind);
  }

  if (j.contains("known_solution")) {
    spec.known_solution = manifold->make_point(vec_from_json(j.at("known_solution")));
  }
  if (j.contains("starts")) {
    for (const auto& s : j.at("starts")) {
      ProblemStart start;
      start.point = manifold->make_point(vec_from_json(s.at("point")));
      if (s.contains("expect")) {
        start.expect = rate_class_from_string(s.at("expect").get<std::string>());
      }
      spec.starts.push_back(std::move(start));
    }
  }
  if (j.contains("notes")) spec.notes = j.at("notes").get<std::string>();
  return spec;
}

}  // namespace

std::vector<ProblemSpec> load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("cannot open problem file: " + path.string());
  }
  json j = json::parse(in);
  std::vector<ProblemSpec> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(problem_from_json(item));
  } else {
    out.push_back(problem_from_json(j));
  }
  return out;
}

}  // namespace rnewton
