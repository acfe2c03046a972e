#include <doctest.h>

#include <random>

#include "reachrisk/errors.hpp"
#include "reachrisk/taylor_model.hpp"
#include "support/samplers.hpp"

using namespace reachrisk;
using test_support::sample_point;

namespace {

Polynomial scalar_poly(int num_vars, const std::vector<std::pair<std::vector<int>, double>>& terms) {
  Polynomial p(num_vars, 1);
  for (const auto& [e, c] : terms) p.add_term(e, Eigen::VectorXd::Constant(1, c));
  return p;
}

TaylorModel scalar_tm(Polynomial p, double rem_lo, double rem_hi, const Interval& domain) {
  return TaylorModel(std::move(p),
                     Interval(Eigen::VectorXd::Constant(1, rem_lo),
                              Eigen::VectorXd::Constant(1, rem_hi)),
                     domain);
}

double sample_scalar(const TaylorModel& tm, const Eigen::VectorXd& x, double t) {
  return tm.sample(x, Eigen::VectorXd::Constant(1, t))[0];
}

}  // namespace

TEST_SUITE_BEGIN("taylor");

TEST_CASE("int_enclose is the naive term-wise evaluation") {
  // x^2 over [-1,1]: naive x*x, not the exact [0,1].
  const Polynomial sq = scalar_poly(1, {{{2}, 1.0}});
  const Interval d1 = Interval::unit_box(1);
  const Interval e1 = int_enclose(sq, d1);
  CHECK(e1.lower()[0] == -1.0);
  CHECK(e1.upper()[0] == 1.0);

  const Polynomial five = scalar_poly(1, {{{0}, 5.0}});
  const Interval e2 = int_enclose(five, d1);
  CHECK(e2.lower()[0] == 5.0);
  CHECK(e2.upper()[0] == 5.0);

  const Polynomial sum = scalar_poly(2, {{{1, 0}, 1.0}, {{0, 1}, 1.0}});
  const Interval e3 = int_enclose(sum, Interval(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)));
  CHECK(e3.lower()[0] == 0.0);
  CHECK(e3.upper()[0] == 2.0);
}

TEST_CASE("int_enclose is inclusion isotonic") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Polynomial p(2, 1);
    for (int dx = 0; dx <= 2; ++dx)
      for (int dy = 0; dy + dx <= 3; ++dy)
        p.add_term({dx, dy}, Eigen::VectorXd::Constant(1, coef(rng)));
    const Eigen::Vector2d mid(coef(rng), coef(rng));
    const Eigen::Vector2d rad(std::abs(coef(rng)) + 0.1, std::abs(coef(rng)) + 0.1);
    const Interval big(mid - rad, mid + rad);
    const Interval small(mid - 0.5 * rad, mid + 0.5 * rad);
    const Interval eb = int_enclose(p, big);
    const Interval es = int_enclose(p, small);
    REQUIRE(eb.contains(es, 1e-12));
  }
}

TEST_CASE("tm_add follows the sum rule bit-exactly") {
  const Interval dom = Interval::unit_box(1);
  const TaylorModel a = scalar_tm(scalar_poly(1, {{{1}, 1.0}}), -0.1, 0.1, dom);
  const TaylorModel sum = tm_add(a, a);
  REQUIRE(sum.poly.terms().size() == 1);
  CHECK(sum.poly.terms()[0].coeff[0] == 2.0);
  CHECK(sum.remainder.lower()[0] == -0.1 + -0.1);
  CHECK(sum.remainder.upper()[0] == 0.1 + 0.1);

  const TaylorModel zero = scalar_tm(Polynomial(1, 1), 0.0, 0.0, dom);
  const TaylorModel same = tm_add(a, zero);
  CHECK(same.poly.terms().size() == 1);
  CHECK(same.remainder.lower()[0] == a.remainder.lower()[0]);

  const TaylorModel other_domain =
      scalar_tm(Polynomial(1, 1), 0.0, 0.0, Interval(Eigen::VectorXd::Constant(1, -2.0),
                                                     Eigen::VectorXd::Constant(1, 2.0)));
  CHECK_THROWS_AS(tm_add(a, other_domain), std::invalid_argument);
}

TEST_CASE("tm_add encloses pointwise sums") {
  std::mt19937_64 rng(22);
  const Interval dom = Interval::unit_box(2);
  const TaylorModel a = scalar_tm(scalar_poly(2, {{{1, 0}, 0.5}, {{1, 1}, -0.25}}), -0.05, 0.08, dom);
  const TaylorModel b = scalar_tm(scalar_poly(2, {{{0, 1}, 1.5}, {{2, 0}, 0.3}}), -0.02, 0.02, dom);
  const TaylorModel sum = tm_add(a, b);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Eigen::Vector2d x(u(rng), u(rng));
    const double va = sample_scalar(a, x, u(rng));
    const double vb = sample_scalar(b, x, u(rng));
    const double ps = sum.poly.evaluate(x)[0];
    REQUIRE(va + vb >= ps + sum.remainder.lower()[0] - 1e-12);
    REQUIRE(va + vb <= ps + sum.remainder.upper()[0] + 1e-12);
  }
}

TEST_CASE("tm_mul truncation and remainder rule") {
  const Interval dom = Interval::unit_box(1);
  const TaylorModel x = scalar_tm(scalar_poly(1, {{{1}, 1.0}}), 0.0, 0.0, dom);

  const TaylorModel exact = tm_mul(x, x, 2);
  REQUIRE(exact.poly.terms().size() == 1);
  CHECK(exact.poly.terms()[0].exponents == std::vector<int>{2});
  CHECK(exact.remainder.lower()[0] == 0.0);
  CHECK(exact.remainder.upper()[0] == 0.0);

  // Truncating at order 1 folds Int(x^2) = [-1,1] into the remainder.
  const TaylorModel trunc = tm_mul(x, x, 1);
  CHECK(trunc.poly.is_zero());
  CHECK(trunc.remainder.lower()[0] == -1.0);
  CHECK(trunc.remainder.upper()[0] == 1.0);
}

TEST_CASE("tm_mul remainder equals the stated interval expression") {
  const Interval dom(Eigen::VectorXd::Constant(1, -0.5), Eigen::VectorXd::Constant(1, 1.5));
  const TaylorModel a = scalar_tm(scalar_poly(1, {{{0}, 0.2}, {{1}, 1.0}}), -0.1, 0.2, dom);
  const TaylorModel b = scalar_tm(scalar_poly(1, {{{1}, -2.0}, {{2}, 0.5}}), -0.3, 0.05, dom);
  const int kappa = 2;
  const TaylorModel prod = tm_mul(a, b, kappa);

  const ScalarInterval ia{-0.1, 0.2};
  const ScalarInterval ib{-0.3, 0.05};
  const ScalarInterval ra = int_enclose(a.poly, dom).at(0);
  const ScalarInterval rb = int_enclose(b.poly, dom).at(0);
  auto [low, high] = multiply(a.poly, b.poly).split_by_degree(kappa);
  ScalarInterval expected = ia * rb + ib * ra + ia * ib;
  const ScalarInterval trunc = int_enclose(high, dom).at(0);
  expected = expected + trunc;
  CHECK(prod.remainder.lower()[0] == expected.lo);
  CHECK(prod.remainder.upper()[0] == expected.hi);
}

TEST_CASE("tm_mul encloses pointwise products") {
  std::mt19937_64 rng(23);
  const Interval dom = Interval::unit_box(1);
  const TaylorModel a = scalar_tm(scalar_poly(1, {{{0}, 0.5}, {{1}, 1.0}}), -0.05, 0.05, dom);
  const TaylorModel b = scalar_tm(scalar_poly(1, {{{1}, -1.0}, {{2}, 0.25}}), -0.1, 0.1, dom);
  const TaylorModel prod = tm_mul(a, b, 2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, u(rng));
    const double va = sample_scalar(a, x, u(rng));
    const double vb = sample_scalar(b, x, u(rng));
    const double pp = prod.poly.evaluate(x)[0];
    REQUIRE(va * vb >= pp + prod.remainder.lower()[0] - 1e-12);
    REQUIRE(va * vb <= pp + prod.remainder.upper()[0] + 1e-12);
  }
}

TEST_CASE("tm_div by a unit constant is the identity") {
  const Interval dom = Interval::unit_box(1);
  const TaylorModel a = scalar_tm(scalar_poly(1, {{{0}, 0.3}, {{1}, 0.7}}), -0.01, 0.01, dom);
  const TaylorModel one = scalar_tm(scalar_poly(1, {{{0}, 1.0}}), 0.0, 0.0, dom);
  const TaylorModel q = tm_div(a, one, 3);
  REQUIRE(q.poly.terms().size() == a.poly.terms().size());
  for (size_t i = 0; i < q.poly.terms().size(); ++i)
    CHECK(q.poly.terms()[i].coeff[0] == a.poly.terms()[i].coeff[0]);
  CHECK(q.remainder.lower()[0] == a.remainder.lower()[0]);
  CHECK(q.remainder.upper()[0] == a.remainder.upper()[0]);
}

TEST_CASE("tm_div of constants and sampled ratios") {
  const Interval dom = Interval::unit_box(1);
  const TaylorModel one = scalar_tm(scalar_poly(1, {{{0}, 1.0}}), 0.0, 0.0, dom);
  const TaylorModel two = scalar_tm(scalar_poly(1, {{{0}, 2.0}}), 0.0, 0.0, dom);
  const TaylorModel half = tm_div(one, two, 2);
  const Interval r = half.range();
  CHECK(r.lower()[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.upper()[0] == doctest::Approx(0.5).epsilon(1e-12));

  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const TaylorModel num = scalar_tm(scalar_poly(1, {{{0}, 1.0}, {{1}, 0.5}}), -0.02, 0.02, dom);
  const TaylorModel den = scalar_tm(scalar_poly(1, {{{0}, 3.0}, {{1}, 0.4}}), -0.05, 0.05, dom);
  const TaylorModel quot = tm_div(num, den, 3);
  for (int i = 0; i < 500; ++i) {
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, u(rng));
    const double vn = sample_scalar(num, x, u(rng));
    const double vd = sample_scalar(den, x, u(rng));
    const double val = vn / vd;
    const double pq = quot.poly.evaluate(x)[0];
    REQUIRE(val >= pq + quot.remainder.lower()[0] - 1e-9);
    REQUIRE(val <= pq + quot.remainder.upper()[0] + 1e-9);
  }

  const TaylorModel spans_zero = scalar_tm(scalar_poly(1, {{{1}, 1.0}}), 0.0, 0.0, dom);
  CHECK_THROWS_AS(tm_div(one, spans_zero, 2), SingularDivisionError);
}

TEST_CASE("zonotope_to_tm splits axial and non-axial generators") {
  Eigen::MatrixXd axes(2, 2);
  axes << 0.5, 0, 0, 0.25;
  const Zonotope box(Eigen::Vector2d(1, 2), axes);
  const TaylorModel tm_box = zonotope_to_tm(box);
  CHECK(tm_box.poly.num_vars() == 0);
  CHECK(tm_box.poly.terms().size() == 1);  // just the center
  CHECK(tm_box.remainder.lower() == Eigen::Vector2d(-0.5, -0.25));
  CHECK(tm_box.remainder.upper() == Eigen::Vector2d(0.5, 0.25));

  Eigen::MatrixXd rot(2, 2);
  rot << 1, 1, 1, -1;
  const TaylorModel tm_rot = zonotope_to_tm(Zonotope(Eigen::Vector2d::Zero(), rot));
  CHECK(tm_rot.poly.num_vars() == 2);
  CHECK(tm_rot.remainder.lower() == Eigen::Vector2d(0, 0));
  const Eigen::Vector2d v = tm_rot.poly.evaluate(Eigen::Vector2d(0.5, -0.5));
  CHECK(v == Eigen::Vector2d(0.0, 1.0));  // [x1+x2, x1-x2]

  Eigen::MatrixXd many(2, 3);
  many << 1, 1, 1, 1, -1, 2;
  CHECK_THROWS_AS(zonotope_to_tm(Zonotope(Eigen::Vector2d::Zero(), many)),
                  std::invalid_argument);
}

TEST_CASE("round trip zonotope -> model -> zonotope preserves the set") {
  std::mt19937_64 rng(25);
  Eigen::MatrixXd G(2, 4);
  G << 0.8, -0.3, 0.4, 0.0, 0.2, 0.9, 0.0, 0.35;
  for (int trial = 0; trial < 20; ++trial) {
    const Zonotope z(test_support::uniform_pm1(rng, 2), G);
    const Zonotope rt = tm_to_zonotope(zonotope_to_tm(z));
    for (int i = 0; i < 50; ++i) {
      REQUIRE(contains_point(rt, sample_point(z, rng)));
      REQUIRE(contains_point(z, sample_point(rt, rng)));
    }
  }
}

TEST_CASE("tm_to_zonotope boxes the nonlinear part") {
  const Interval dom = Interval::unit_box(1);
  const TaylorModel sq = scalar_tm(scalar_poly(1, {{{2}, 1.0}}), 0.0, 0.0, dom);
  const Zonotope z = tm_to_zonotope(sq);
  CHECK(z.center()[0] == 0.0);
  REQUIRE(z.num_generators() == 1);
  CHECK(z.generators()(0, 0) == 1.0);

  std::mt19937_64 rng(26);
  const TaylorModel mixed = scalar_tm(
      scalar_poly(1, {{{0}, 0.2}, {{1}, 1.0}, {{2}, -0.5}, {{3}, 0.1}}), -0.05, 0.02, dom);
  const Zonotope enclosing = tm_to_zonotope(mixed);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd p = sample_point(mixed, rng);
    REQUIRE(contains_point(enclosing, p));
  }

  // A purely linear model over the unit box converts back exactly.
  const Zonotope z0 = test_support::random_zonotope(rng, 3, 3);
  const Zonotope back = tm_to_zonotope(tm_from_zonotope(z0));
  CHECK(back.center().isApprox(z0.center(), 1e-14));
  CHECK(back.generators().isApprox(z0.generators(), 1e-14));
}

TEST_CASE("ellipsoid_to_tm encloses the ellipsoid") {
  // Unit ball: both boxes coincide, the model covers exactly [-1,1]^n.
  const Ellipsoid ball(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity());
  const TaylorModel tm_ball = ellipsoid_to_tm(ball);
  const Interval r = tm_ball.range();
  CHECK(r.lower().isApprox(Eigen::Vector2d(-1, -1), 1e-12));
  CHECK(r.upper().isApprox(Eigen::Vector2d(1, 1), 1e-12));

  std::mt19937_64 rng(27);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Eigen::Index n : {2, 3}) {
    const Eigen::MatrixXd Q = test_support::random_spd(rng, n);
    const Ellipsoid e(Eigen::VectorXd::Zero(n), Q);
    const Zonotope z = tm_to_zonotope(ellipsoid_to_tm(e));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
    const Eigen::MatrixXd inv_sqrt = es.operatorInverseSqrt();
    for (int i = 0; i < 1000; ++i) {
      Eigen::VectorXd dir(n);
      for (Eigen::Index k = 0; k < n; ++k) dir[k] = g(rng);
      dir.normalize();
      const double radius = (i % 4 == 0) ? 1.0 : std::pow(u(rng), 1.0 / n);
      REQUIRE(contains_point(z, radius * (inv_sqrt * dir)));
    }
  }
}

TEST_SUITE_END();
