#include "rnewton/sampling.hpp"

#include <cmath>

namespace rnewton {

Eigen::VectorXd random_unit_coeffs(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(dim);
  double n = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
    n = v.norm();
  } while (n < 1e-12);
  return v / n;
}

TangentVector random_tangent_with_norm(const Manifold& m, const Point& p,
                                       double norm, std::mt19937_64& rng) {
  const std::vector<TangentVector> frame = m.orthonormal_frame(p);
  const Eigen::VectorXd coeffs =
      norm * random_unit_coeffs(static_cast<int>(frame.size()), rng);
  return m.from_frame(frame, coeffs);
}

TangentVector random_tangent_in_ball(const Manifold& m, const Point& p,
                                     double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double r =
      radius * std::pow(unif(rng), 1.0 / static_cast<double>(m.intrinsic_dim()));
  return random_tangent_with_norm(m, p, r, rng);
}

Point random_point_in_ball(const Manifold& m, const Point& p, double radius,
                           std::mt19937_64& rng) {
  return m.exp_map(p, random_tangent_in_ball(m, p, radius, rng));
}

}  // namespace rnewton
