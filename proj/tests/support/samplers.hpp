#pragma once

#include <random>

#include "reachrisk/taylor_model.hpp"
#include "reachrisk/zonotope.hpp"

namespace test_support {

inline Eigen::VectorXd uniform_pm1(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline Eigen::VectorXd sample_point(const reachrisk::Zonotope& z, std::mt19937_64& rng) {
  return z.center() + z.generators() * uniform_pm1(rng, z.num_generators());
}

inline Eigen::VectorXd sample_point(const reachrisk::TaylorModel& tm, std::mt19937_64& rng) {
  const Eigen::VectorXd x = uniform_pm1(rng, tm.domain.dim()).cwiseProduct(tm.domain.radii()) +
                            tm.domain.mid();
  return tm.sample(x, uniform_pm1(rng, tm.codomain()));
}

inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = g(rng);
  return scale * (A * A.transpose() + 0.2 * Eigen::MatrixXd::Identity(n, n));
}

inline reachrisk::Zonotope random_zonotope(std::mt19937_64& rng, Eigen::Index dim,
                                           Eigen::Index gens, double center_span = 2.0,
                                           double gen_span = 1.0) {
  std::uniform_real_distribution<double> c(-center_span, center_span);
  std::uniform_real_distribution<double> g(-gen_span, gen_span);
  Eigen::VectorXd center(dim);
  for (Eigen::Index i = 0; i < dim; ++i) center[i] = c(rng);
  Eigen::MatrixXd G(dim, gens);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < gens; ++j) G(i, j) = g(rng);
  return reachrisk::Zonotope(center, G);
}

}  // namespace test_support
