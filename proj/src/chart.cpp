#include "rnewton/chart.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace rnewton {

namespace {

using Rhs = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using StateCheck = std::function<bool(const Eigen::VectorXd&)>;

// Dormand-Prince 5(4) embedded pair.
struct Dopri {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                          e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                          e6 = 187.0 / 2100, e7 = 1.0 / 40;
};

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, const OdeSettings& s) {
  double acc = 0.0;
  for (int i = 0; i < err.size(); ++i) {
    const double sc =
        s.abs_tol + s.rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double q = err(i) / sc;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

Eigen::VectorXd integrate_adaptive(const Rhs& f, Eigen::VectorXd y,
                                   double t_end, const OdeSettings& s,
                                   const StateCheck& in_domain, int* steps_out) {
  if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0) || s.max_steps < 1) {
    throw DimensionError("ode: tolerances must be positive and max_steps >= 1");
  }
  const double dir = (t_end >= 0.0) ? 1.0 : -1.0;
  const double t_abs = std::abs(t_end);
  if (t_abs == 0.0) return y;

  double t = 0.0;
  double h = dir * t_abs / 64.0;
  const double h_min = t_abs * 1e-14;
  int steps = 0;

  while (std::abs(t) < t_abs) {
    if (++steps > s.max_steps) {
      throw NonconvergenceError("ode: step limit exceeded");
    }
    if (std::abs(h) > t_abs - std::abs(t)) {
      h = dir * (t_abs - std::abs(t));
    }
    const Eigen::VectorXd k1 = f(y);
    const Eigen::VectorXd k2 = f(y + h * (Dopri::a21 * k1));
    const Eigen::VectorXd k3 = f(y + h * (Dopri::a31 * k1 + Dopri::a32 * k2));
    const Eigen::VectorXd k4 =
        f(y + h * (Dopri::a41 * k1 + Dopri::a42 * k2 + Dopri::a43 * k3));
    const Eigen::VectorXd k5 = f(y + h * (Dopri::a51 * k1 + Dopri::a52 * k2 +
                                          Dopri::a53 * k3 + Dopri::a54 * k4));
    const Eigen::VectorXd k6 =
        f(y + h * (Dopri::a61 * k1 + Dopri::a62 * k2 + Dopri::a63 * k3 +
                   Dopri::a64 * k4 + Dopri::a65 * k5));
    const Eigen::VectorXd y5 =
        y + h * (Dopri::b1 * k1 + Dopri::b3 * k3 + Dopri::b4 * k4 +
                 Dopri::b5 * k5 + Dopri::b6 * k6);
    const Eigen::VectorXd k7 = f(y5);
    const Eigen::VectorXd y4 =
        y + h * (Dopri::e1 * k1 + Dopri::e3 * k3 + Dopri::e4 * k4 +
                 Dopri::e5 * k5 + Dopri::e6 * k6 + Dopri::e7 * k7);

    const double err = error_norm(y5 - y4, y, y5, s);
    if (err <= 1.0) {
      t += h;
      y = y5;
      if (!in_domain(y)) {
        throw DomainError("ode: trajectory left the chart domain");
      }
    }
    const double factor =
        (err > 0.0) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
    h *= factor;
    if (std::abs(h) < h_min) {
      throw NonconvergenceError("ode: step size underflow");
    }
  }
  if (steps_out) *steps_out = steps;
  return y;
}

Eigen::VectorXd integrate_rk4(const Rhs& f, Eigen::VectorXd y, double t_end,
                              const OdeSettings& s, const StateCheck& in_domain,
                              int* steps_out) {
  if (t_end == 0.0) return y;
  const int n = std::clamp(static_cast<int>(std::ceil(std::abs(t_end) / 0.005)),
                           32, s.max_steps);
  const double h = t_end / n;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd k1 = f(y);
    const Eigen::VectorXd k2 = f(y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!in_domain(y)) {
      throw DomainError("ode: trajectory left the chart domain");
    }
  }
  if (steps_out) *steps_out = n;
  return y;
}

Eigen::VectorXd integrate(const Rhs& f, const Eigen::VectorXd& y0, double t_end,
                          const OdeSettings& s, const StateCheck& in_domain,
                          int* steps_out) {
  return s.method == OdeMethod::rk4
             ? integrate_rk4(f, y0, t_end, s, in_domain, steps_out)
             : integrate_adaptive(f, y0, t_end, s, in_domain, steps_out);
}

void require_in_domain(const ChartSpec& spec, const Eigen::VectorXd& p,
                       const char* what) {
  if (spec.domain && !spec.domain(p)) {
    throw DomainError(std::string(what) + ": point outside the chart domain");
  }
}

}  // namespace

GeodesicEnd geodesic_integrate(const ChartSpec& spec, const Eigen::VectorXd& p,
                               const Eigen::VectorXd& v, double t_end,
                               const OdeSettings& settings) {
  const int n = spec.dim;
  require_in_domain(spec, p, "geodesic_integrate");

  // State y = [x, xdot]; x'' = -Γ(x)(x', x').
  Rhs rhs = [&spec, n](const Eigen::VectorXd& y) {
    const Eigen::VectorXd x = y.head(n);
    const Eigen::VectorXd xd = y.segment(n, n);
    const std::vector<Eigen::MatrixXd> gamma = spec.christoffel(x);
    Eigen::VectorXd dy(2 * n);
    dy.head(n) = xd;
    for (int k = 0; k < n; ++k) {
      dy(n + k) = -xd.dot(gamma[k] * xd);
    }
    return dy;
  };
  StateCheck check = [&spec, n](const Eigen::VectorXd& y) {
    return !spec.domain || spec.domain(y.head(n));
  };

  Eigen::VectorXd y0(2 * n);
  y0 << p, v;
  GeodesicEnd end;
  const Eigen::VectorXd y = integrate(rhs, y0, t_end, settings, check, &end.steps);
  end.position = y.head(n);
  end.velocity = y.segment(n, n);
  return end;
}

Eigen::VectorXd transport_integrate(const ChartSpec& spec,
                                    const Eigen::VectorXd& p,
                                    const Eigen::VectorXd& v,
                                    const Eigen::VectorXd& u, double t_end,
                                    const OdeSettings& settings) {
  const int n = spec.dim;
  require_in_domain(spec, p, "transport_integrate");

  // State y = [x, xdot, Y]; dY^k/dt = -Γ^k_{ij} x'^i Y^j.
  Rhs rhs = [&spec, n](const Eigen::VectorXd& y) {
    const Eigen::VectorXd x = y.head(n);
    const Eigen::VectorXd xd = y.segment(n, n);
    const Eigen::VectorXd Y = y.segment(2 * n, n);
    const std::vector<Eigen::MatrixXd> gamma = spec.christoffel(x);
    Eigen::VectorXd dy(3 * n);
    dy.head(n) = xd;
    for (int k = 0; k < n; ++k) {
      dy(n + k) = -xd.dot(gamma[k] * xd);
      dy(2 * n + k) = -xd.dot(gamma[k] * Y);
    }
    return dy;
  };
  StateCheck check = [&spec, n](const Eigen::VectorXd& y) {
    return !spec.domain || spec.domain(y.head(n));
  };

  Eigen::VectorXd y0(3 * n);
  y0 << p, v, u;
  const Eigen::VectorXd y = integrate(rhs, y0, t_end, settings, check, nullptr);
  return y.segment(2 * n, n);
}

Eigen::VectorXd chart_log(const ChartSpec& spec, const Eigen::VectorXd& p,
                          const Eigen::VectorXd& q,
                          const OdeSettings& settings) {
  const int n = spec.dim;
  require_in_domain(spec, p, "chart_log");
  require_in_domain(spec, q, "chart_log");

  auto endpoint = [&](const Eigen::VectorXd& v) {
    return geodesic_integrate(spec, p, v, 1.0, settings).position;
  };

  Eigen::VectorXd v = q - p;  // flat initial guess
  Eigen::VectorXd r;
  {
    bool ok = false;
    for (int shrink = 0; shrink < 60 && !ok; ++shrink) {
      try {
        r = q - endpoint(v);
        ok = true;
      } catch (const DomainError&) {
        v *= 0.5;  // a too-long flat guess may leave the chart
      }
    }
    if (!ok) {
      throw NonconvergenceError("chart_log: no admissible initial guess");
    }
  }
  const double tol = 1e-9 * std::max(1.0, q.norm());
  for (int iter = 0; iter < 50; ++iter) {
    if (r.norm() <= tol) return v;
    // Finite-difference Jacobian of the endpoint w.r.t. the velocity.
    Eigen::MatrixXd J(n, n);
    const double eta = 1e-7 * std::max(1.0, v.norm());
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd dv = Eigen::VectorXd::Zero(n);
      dv(j) = eta;
      J.col(j) = (endpoint(v + dv) - endpoint(v - dv)) / (2.0 * eta);
    }
    const Eigen::VectorXd delta = J.partialPivLu().solve(r);
    double lambda = 1.0;
    while (true) {
      // A trial that exits the chart counts as a residual increase.
      bool exited = false;
      Eigen::VectorXd r_new;
      try {
        r_new = q - endpoint(v + lambda * delta);
      } catch (const DomainError&) {
        exited = true;
      }
      if (!exited && (r_new.norm() < r.norm() || lambda < 1.0 / 1024.0)) {
        v += lambda * delta;
        r = r_new;
        break;
      }
      if (lambda < 1.0 / 1024.0) {
        throw NonconvergenceError("chart_log: damped steps keep leaving the chart");
      }
      lambda *= 0.5;
    }
  }
  if (r.norm() <= tol) return v;
  throw NonconvergenceError("chart_log: shooting did not converge in 50 iterations");
}

ChristoffelFn christoffel_from_metric(MetricFn metric, int dim) {
  const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
  return [metric, dim, h0](const Eigen::VectorXd& x) {
    // dg[l](i,j) = ∂_l g_ij by central differences.
    std::vector<Eigen::MatrixXd> dg(dim);
    for (int l = 0; l < dim; ++l) {
      const double h = h0 * std::max(1.0, std::abs(x(l)));
      Eigen::VectorXd xp = x, xm = x;
      xp(l) += h;
      xm(l) -= h;
      dg[l] = (metric(xp) - metric(xm)) / (2.0 * h);
    }
    const Eigen::MatrixXd ginv = metric(x).inverse();
    std::vector<Eigen::MatrixXd> gamma(dim, Eigen::MatrixXd::Zero(dim, dim));
    for (int k = 0; k < dim; ++k) {
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          double acc = 0.0;
          for (int l = 0; l < dim; ++l) {
            acc += ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
          }
          gamma[k](i, j) = 0.5 * acc;
        }
      }
    }
    return gamma;
  };
}

bool chart_symmetry_ok(const ChartSpec& spec, const Eigen::VectorXd& x,
                       double tol) {
  const std::vector<Eigen::MatrixXd> gamma = spec.christoffel(x);
  for (const Eigen::MatrixXd& g : gamma) {
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

ChartManifold::ChartManifold(ChartSpec spec, OdeSettings settings,
                             double injectivity_radius, CurvatureSign curvature,
                             std::string label)
    : spec_(std::move(spec)),
      settings_(settings),
      injectivity_(injectivity_radius),
      curvature_(curvature),
      label_(std::move(label)) {
  if (spec_.dim < 1) throw DimensionError("chart: dim must be >= 1");
  if (!spec_.christoffel) throw DimensionError("chart: christoffel_fn required");
  if (!spec_.metric) throw DimensionError("chart: metric_fn required");
}

double ChartManifold::injectivity_radius(const Point& p) const {
  check_owns(p);
  return injectivity_;
}

bool ChartManifold::is_point(const Eigen::VectorXd& coords, double) const {
  if (coords.size() != spec_.dim || !coords.allFinite()) return false;
  return !spec_.domain || spec_.domain(coords);
}

bool ChartManifold::is_tangent(const Point&, const Eigen::VectorXd& components,
                               double) const {
  return components.size() == spec_.dim && components.allFinite();
}

double ChartManifold::distance(const Point& p, const Point& q) const {
  check_owns(p);
  check_owns(q);
  const Eigen::VectorXd v = chart_log(spec_, p.coords, q.coords, settings_);
  return std::sqrt(std::max(0.0, v.dot(spec_.metric(p.coords) * v)));
}

double ChartManifold::inner_impl(const Point& p, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& v) const {
  return u.dot(spec_.metric(p.coords) * v);
}

Eigen::VectorXd ChartManifold::exp_impl(const Point& p,
                                        const Eigen::VectorXd& v) const {
  return geodesic_integrate(spec_, p.coords, v, 1.0, settings_).position;
}

Eigen::VectorXd ChartManifold::log_impl(const Point& p, const Point& q) const {
  return chart_log(spec_, p.coords, q.coords, settings_);
}

Eigen::VectorXd ChartManifold::transport_impl(const Point& p, const Point& q,
                                              const Eigen::VectorXd& v) const {
  if ((p.coords - q.coords).lpNorm<Eigen::Infinity>() == 0.0) return v;
  const Eigen::VectorXd w = chart_log(spec_, p.coords, q.coords, settings_);
  return transport_integrate(spec_, p.coords, w, v, 1.0, settings_);
}

Eigen::VectorXd ChartManifold::project_point_impl(
    const Eigen::VectorXd& coords) const {
  return coords;
}

Eigen::VectorXd ChartManifold::project_tangent_impl(
    const Point&, const Eigen::VectorXd& w) const {
  return w;
}

}  // namespace rnewton
