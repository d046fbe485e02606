#pragma once

#include "rnewton/manifold.hpp"

#include <functional>
#include <limits>

namespace rnewton {

enum class OdeMethod { dopri54, rk4 };

struct OdeSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_steps = 100000;
  OdeMethod method = OdeMethod::dopri54;
};

/// Christoffel symbols at a chart point: gamma[k](i,j) = Γ^k_{ij}.
using ChristoffelFn =
    std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)>;
using MetricFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
using DomainFn = std::function<bool(const Eigen::VectorXd&)>;

/// A manifold presented in a single coordinate chart: metric, Christoffel
/// symbols of the Levi-Civita connection, and a domain predicate.
struct ChartSpec {
  int dim = 0;
  ChristoffelFn christoffel;
  MetricFn metric;
  DomainFn domain;
};

struct GeodesicEnd {
  Eigen::VectorXd position;
  Eigen::VectorXd velocity;
  int steps = 0;
};

/// Integrates the geodesic equation x'' + Γ(x)(x', x') = 0 from (p, v)
/// to t_end. Throws DomainError on chart exit and NonconvergenceError on
/// step-limit exhaustion.
GeodesicEnd geodesic_integrate(const ChartSpec& spec, const Eigen::VectorXd& p,
                               const Eigen::VectorXd& v, double t_end,
                               const OdeSettings& settings = {});

/// Transports `u` along the geodesic from (p, v): solves
/// dY^k/dt + Γ^k_{ij} x'^i Y^j = 0 with Y(0) = u.
Eigen::VectorXd transport_integrate(const ChartSpec& spec,
                                    const Eigen::VectorXd& p,
                                    const Eigen::VectorXd& v,
                                    const Eigen::VectorXd& u, double t_end,
                                    const OdeSettings& settings = {});

/// Inverts the exponential map by damped-Newton shooting: returns v with
/// geodesic endpoint(p, v, 1) = q to within 1e-8 in chart coordinates.
Eigen::VectorXd chart_log(const ChartSpec& spec, const Eigen::VectorXd& p,
                          const Eigen::VectorXd& q,
                          const OdeSettings& settings = {});

/// Derives Christoffel symbols from a metric by central differences with
/// step h = cbrt(eps) scaled per coordinate.
ChristoffelFn christoffel_from_metric(MetricFn metric, int dim);

/// Γ^k_{ij} = Γ^k_{ji} within tol at x (Levi-Civita is torsion-free).
bool chart_symmetry_ok(const ChartSpec& spec, const Eigen::VectorXd& x,
                       double tol = 1e-8);

/// Manifold adapter over a ChartSpec: exp/log/transport/distance are
/// computed by numerical integration and shooting. Chart coordinates are
/// the ambient representation, so every vector is tangent.
class ChartManifold final : public Manifold {
 public:
  ChartManifold(ChartSpec spec, OdeSettings settings = {},
                double injectivity_radius =
                    std::numeric_limits<double>::infinity(),
                CurvatureSign curvature = CurvatureSign::mixed,
                std::string label = "chart");

  std::string name() const override { return label_; }
  int intrinsic_dim() const override { return spec_.dim; }
  int ambient_dim() const override { return spec_.dim; }
  double injectivity_radius(const Point& p) const override;
  CurvatureSign curvature_sign() const override { return curvature_; }

  bool is_point(const Eigen::VectorXd& coords, double tol) const override;
  bool is_tangent(const Point& p, const Eigen::VectorXd& components,
                  double tol) const override;
  double distance(const Point& p, const Point& q) const override;

  const ChartSpec& spec() const { return spec_; }
  const OdeSettings& ode_settings() const { return settings_; }

 protected:
  double inner_impl(const Point& p, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v) const override;
  Eigen::VectorXd exp_impl(const Point& p, const Eigen::VectorXd& v) const override;
  Eigen::VectorXd log_impl(const Point& p, const Point& q) const override;
  Eigen::VectorXd transport_impl(const Point& p, const Point& q,
                                 const Eigen::VectorXd& v) const override;
  Eigen::VectorXd project_point_impl(const Eigen::VectorXd& coords) const override;
  Eigen::VectorXd project_tangent_impl(const Point& p,
                                       const Eigen::VectorXd& w) const override;

 private:
  ChartSpec spec_;
  OdeSettings settings_;
  double injectivity_;
  CurvatureSign curvature_;
  std::string label_;
};

}  // namespace rnewton
