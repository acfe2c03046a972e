#include <doctest.h>

#include <cmath>
#include <random>

#include "reachrisk/errors.hpp"
#include "reachrisk/forklift.hpp"
#include "reachrisk/smooth_map.hpp"
#include "support/samplers.hpp"

using namespace reachrisk;

namespace {

SmoothMap sine_map() {
  auto eval = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, std::sin(x[0])); };
  auto deriv = [](const MultiIndex& J, const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, std::sin(x[0] + J[0] * 1.57079632679489661923));
  };
  auto ideriv = [](const MultiIndex& J, const Interval& box) {
    const ScalarInterval shifted{box.at(0).lo + J[0] * 1.57079632679489661923,
                                 box.at(0).hi + J[0] * 1.57079632679489661923};
    const ScalarInterval r = interval_sin(shifted);
    return Interval(Eigen::VectorXd::Constant(1, r.lo), Eigen::VectorXd::Constant(1, r.hi));
  };
  return SmoothMap::analytic(1, 1, eval, deriv, ideriv, 1000);
}

bool model_contains(const TaylorModel& tm, const Eigen::VectorXd& deviation,
                    const Eigen::VectorXd& value, double tol = 1e-12) {
  const Eigen::VectorXd p = tm.poly.evaluate(deviation);
  for (int d = 0; d < tm.codomain(); ++d) {
    if (value[d] < p[d] + tm.remainder.lower()[d] - tol) return false;
    if (value[d] > p[d] + tm.remainder.upper()[d] + tol) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE_BEGIN("expand");

TEST_CASE("affine maps expand exactly with zero remainder") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd A(3, 3);
  Eigen::Vector3d b;
  for (int i = 0; i < 3; ++i) {
    b[i] = g(rng);
    for (int j = 0; j < 3; ++j) A(i, j) = g(rng);
  }
  const SmoothMap map = SmoothMap::linear(A, b);
  const Eigen::Vector3d center(0.5, -1.0, 2.0);
  const Interval domain(center - Eigen::Vector3d::Ones(), center + Eigen::Vector3d::Ones());

  for (int order : {1, 2}) {
    const TaylorModel tm = taylor_expand(map, center, domain, order);
    CHECK(tm.remainder.lower() == Eigen::Vector3d::Zero());
    CHECK(tm.remainder.upper() == Eigen::Vector3d::Zero());
    // linear coefficients are exactly the columns of A
    for (const auto& term : tm.poly.terms()) {
      if (term.total_degree() == 1) {
        for (int j = 0; j < 3; ++j)
          if (term.exponents[static_cast<size_t>(j)] == 1)
            CHECK(term.coeff == Eigen::VectorXd(A.col(j)));
      } else {
        CHECK(term.total_degree() == 0);
        CHECK(term.coeff == Eigen::VectorXd(A * center + b));
      }
    }
    for (int i = 0; i < 200; ++i) {
      const Eigen::Vector3d w = test_support::uniform_pm1(rng, 3);
      REQUIRE(model_contains(tm, w, A * (center + w) + b));
    }
  }
}

TEST_CASE("sine expansion about zero has the analytic remainder bound") {
  const SmoothMap sine = sine_map();
  const Interval domain(Eigen::VectorXd::Constant(1, -0.1), Eigen::VectorXd::Constant(1, 0.1));
  const TaylorModel tm = taylor_expand(sine, Eigen::VectorXd::Zero(1), domain, 1);

  // |sin''| <= 1 and |x|^2/2 <= 0.005 on the domain.
  CHECK(tm.remainder.lower()[0] >= -0.005);
  CHECK(tm.remainder.upper()[0] <= 0.005);

  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    REQUIRE(model_contains(tm, Eigen::VectorXd::Constant(1, x),
                           Eigen::VectorXd::Constant(1, std::sin(x))));
  }
}

TEST_CASE("forklift dynamics expansion encloses the exact map") {
  const ForkliftParams params;
  const SystemModel model = make_forklift_model(params);
  Eigen::VectorXd center(4);
  center << 0.0, 5.0, 0.0, 0.0;  // x = [0, 5, 0], u = 0
  Eigen::VectorXd rad(4);
  rad << 0.3, 0.3, 0.06, 0.06;
  const Interval domain(center - rad, center + rad);
  const TaylorModel tm = taylor_expand(model.dynamics, center, domain, 2);

  std::mt19937_64 rng(33);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd w = test_support::uniform_pm1(rng, 4).cwiseProduct(rad);
    const Eigen::VectorXd exact = model.f((center + w).head(3), (center + w).tail(1));
    REQUIRE(model_contains(tm, w, exact));
  }
}

TEST_CASE("divided differences match analytic derivatives") {
  auto square = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, x[0] * x[0]); };
  const Eigen::VectorXd at0 = Eigen::VectorXd::Zero(1);
  CHECK(std::abs(derivatives_by_divided_differences(square, 1, {1}, at0)[0]) <= 1e-8);
  CHECK(derivatives_by_divided_differences(square, 1, {2}, at0)[0] ==
        doctest::Approx(2.0).epsilon(1e-4));

  Eigen::MatrixXd A(2, 2);
  A << 1.5, -2.0, 0.25, 3.0;
  auto linear = [A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; };
  for (const MultiIndex& J : {MultiIndex{2, 0}, MultiIndex{1, 1}, MultiIndex{0, 2}}) {
    const Eigen::VectorXd d = derivatives_by_divided_differences(linear, 2, J, Eigen::Vector2d(0.3, -0.7));
    CHECK(d.cwiseAbs().maxCoeff() <= 1e-6);
  }

  auto prod = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, x[0] * x[1]); };
  CHECK(derivatives_by_divided_differences(prod, 2, {1, 1}, Eigen::Vector2d::Zero())[0] ==
        doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(derivatives_by_divided_differences(square, 1, {4}, at0), UnsupportedOrderError);
}

TEST_CASE("finite-difference maps stay exact on low-degree polynomials") {
  auto square = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, x[0] * x[0]); };
  const SmoothMap fd = SmoothMap::from_evaluator(1, 1, square);
  const Interval domain(Eigen::VectorXd::Constant(1, -0.1), Eigen::VectorXd::Constant(1, 0.1));
  const TaylorModel tm = taylor_expand(fd, Eigen::VectorXd::Zero(1), domain, 2);
  CHECK(std::abs(tm.remainder.lower()[0]) <= 1e-6);
  CHECK(std::abs(tm.remainder.upper()[0]) <= 1e-6);

  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int i = 0; i < 500; ++i) {
    const double x = u(rng);
    REQUIRE(model_contains(tm, Eigen::VectorXd::Constant(1, x),
                           Eigen::VectorXd::Constant(1, x * x), 1e-6));
  }
}

TEST_CASE("halving the domain shrinks first-order remainders") {
  const SmoothMap sine = sine_map();
  auto width_for = [&](double r) {
    const Interval domain(Eigen::VectorXd::Constant(1, -r), Eigen::VectorXd::Constant(1, r));
    const TaylorModel tm = taylor_expand(sine, Eigen::VectorXd::Zero(1), domain, 1);
    return tm.remainder.upper()[0] - tm.remainder.lower()[0];
  };
  CHECK(width_for(0.1) < width_for(0.2));

  const ForkliftParams params;
  const SystemModel model = make_forklift_model(params);
  Eigen::VectorXd center(4);
  center << 0.0, 5.0, 0.1, 0.05;
  auto fk_width = [&](double r) {
    const Interval domain(center - Eigen::VectorXd::Constant(4, r),
                          center + Eigen::VectorXd::Constant(4, r));
    const TaylorModel tm = taylor_expand(model.dynamics, center, domain, 1);
    return (tm.remainder.upper() - tm.remainder.lower()).maxCoeff();
  };
  CHECK(fk_width(0.05) < fk_width(0.1));
}

TEST_CASE("center must lie inside the expansion domain") {
  const SmoothMap sine = sine_map();
  const Interval domain(Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Constant(1, 1.0));
  CHECK_THROWS_AS(taylor_expand(sine, Eigen::VectorXd::Zero(1), domain, 1),
                  std::invalid_argument);
}

TEST_SUITE_END();
