#include <doctest.h>

#include <random>

#include "reachrisk/ellipsoid.hpp"
#include "reachrisk/zonotope.hpp"
#include "support/polygon.hpp"
#include "support/samplers.hpp"

using namespace reachrisk;
using test_support::sample_point;

namespace {

Zonotope unit_box_2d(const Eigen::Vector2d& c) {
  return Zonotope(c, Eigen::Matrix2d::Identity());
}

}  // namespace

TEST_SUITE_BEGIN("sets");

TEST_CASE("minkowski sum concatenates centers and generators") {
  Eigen::MatrixXd ga(2, 2);
  ga << 1, 0, 0, 1;
  Eigen::MatrixXd gb(2, 2);
  gb << 0.5, 0, 0, 0.5;
  const Zonotope a(Eigen::Vector2d(0, 0), ga);
  const Zonotope b(Eigen::Vector2d(1, 1), gb);
  const Zonotope s = minkowski_sum(a, b);
  CHECK(s.center() == Eigen::Vector2d(1, 1));
  Eigen::MatrixXd expected(2, 4);
  expected << 1, 0, 0.5, 0, 0, 1, 0, 0.5;
  CHECK(s.generators() == expected);

  const Zonotope ident = minkowski_sum(a, Zonotope::point(Eigen::Vector2d(0, 0)));
  CHECK(ident.center() == a.center());
  CHECK(ident.generators() == a.generators());

  CHECK_THROWS_AS(minkowski_sum(a, Zonotope::point(Eigen::Vector3d(0, 0, 0))),
                  std::invalid_argument);
}

TEST_CASE("minkowski sum is exact on sampled points") {
  std::mt19937_64 rng(7);
  const Zonotope a = test_support::random_zonotope(rng, 3, 4);
  const Zonotope b = test_support::random_zonotope(rng, 3, 3);
  const Zonotope s = minkowski_sum(a, b);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd p = sample_point(a, rng) + sample_point(b, rng);
    REQUIRE(contains_point(s, p));
  }
}

TEST_CASE("linear map") {
  const Zonotope z1(Eigen::VectorXd::Constant(1, 1.0), Eigen::MatrixXd::Constant(1, 1, 3.0));
  const Zonotope doubled = linear_map(2.0 * Eigen::MatrixXd::Identity(1, 1),
                                      Eigen::VectorXd::Zero(1), z1);
  CHECK(doubled.center()[0] == 2.0);
  CHECK(doubled.generators()(0, 0) == 6.0);

  std::mt19937_64 rng(8);
  const Zonotope z3 = test_support::random_zonotope(rng, 3, 5);
  const Zonotope same = linear_map(Eigen::MatrixXd::Identity(3, 3), Eigen::Vector3d::Zero(), z3);
  CHECK(same.center() == z3.center());
  CHECK(same.generators() == z3.generators());

  Eigen::MatrixXd proj(2, 3);
  proj << 1, 0, 0, 0, 1, 0;
  const Zonotope flat = linear_map(proj, Eigen::Vector2d::Zero(), z3);
  CHECK(flat.center() == z3.center().head(2));
  CHECK(flat.generators() == z3.generators().topRows(2));

  CHECK_THROWS_AS(linear_map(proj, Eigen::Vector3d::Zero(), z3), std::invalid_argument);
  CHECK_THROWS_AS(linear_map(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d::Zero(), z3),
                  std::invalid_argument);
}

TEST_CASE("reduce_order keeps containment and passes through small inputs") {
  std::mt19937_64 rng(9);
  const Zonotope small = test_support::random_zonotope(rng, 2, 2);
  const Zonotope same = reduce_order(small, 2);
  CHECK(same.generators() == small.generators());

  const Zonotope big = test_support::random_zonotope(rng, 2, 10);
  const Zonotope red = reduce_order(big, 4);
  CHECK(red.num_generators() <= 4);
  for (int i = 0; i < 1000; ++i) REQUIRE(contains_point(red, sample_point(big, rng)));

  // An axis-aligned box reduces to itself whatever the target.
  Eigen::MatrixXd axes(2, 4);
  axes << 0.5, 0, 0.25, 0, 0, 1.0, 0, 0.5;
  const Zonotope box(Eigen::Vector2d(1, -1), axes);
  const Zonotope red_box = reduce_order(box, 2);
  const Interval before = to_interval(box);
  const Interval after = to_interval(red_box);
  CHECK(before.lower() == after.lower());
  CHECK(before.upper() == after.upper());

  CHECK_THROWS_AS(reduce_order(big, 1), std::invalid_argument);
}

TEST_CASE("to_interval sums absolute generator entries") {
  Eigen::MatrixXd g(1, 2);
  g << 1, 2;
  const Interval i1 = to_interval(Zonotope(Eigen::VectorXd::Zero(1), g));
  CHECK(i1.lower()[0] == -3.0);
  CHECK(i1.upper()[0] == 3.0);

  Eigen::MatrixXd rot(2, 2);
  rot << 1, 1, 1, -1;
  const Interval i2 = to_interval(Zonotope(Eigen::Vector2d::Zero(), rot));
  CHECK(i2.lower() == Eigen::Vector2d(-2, -2));
  CHECK(i2.upper() == Eigen::Vector2d(2, 2));

  std::mt19937_64 rng(10);
  const Zonotope z = test_support::random_zonotope(rng, 3, 6);
  const Interval hull = to_interval(z);
  for (int i = 0; i < 1000; ++i) REQUIRE(hull.contains(sample_point(z, rng), 1e-12));
}

TEST_CASE("intersects on touching and separated boxes") {
  const Zonotope a = unit_box_2d({0, 0});
  CHECK(intersects(a, unit_box_2d({1.5, 0})));
  CHECK_FALSE(intersects(a, unit_box_2d({3, 0})));
  CHECK(intersects(a, unit_box_2d({2.0, 0})));  // touching counts
  CHECK(intersects(a, a));
  CHECK_THROWS_AS(intersects(a, Zonotope::point(Eigen::Vector3d::Zero())),
                  std::invalid_argument);
}

TEST_CASE("intersects agrees with the grid oracle away from tangency") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Zonotope a = test_support::random_zonotope(rng, 2, 4, 1.5, 0.8);
    const Zonotope b = test_support::random_zonotope(rng, 2, 3, 1.5, 0.8);
    const bool lp = intersects(a, b);
    CHECK(lp == intersects(b, a));
    if (lp) {
      const auto clipped = test_support::clip_convex(test_support::zonogon_vertices(a),
                                                     test_support::zonogon_vertices(b));
      if (test_support::chebyshev_inf_radius(clipped) < 0.02) continue;  // near-tangent
    }
    ++checked;
    REQUIRE(lp == test_support::grid_intersects(a, b, 0.01));
  }
  CHECK(checked > 20);
}

TEST_CASE("ellipsoid bounding boxes") {
  const Ellipsoid ball(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity());
  const auto [h1, h2] = ellipsoid_bounding_boxes(ball);
  CHECK(to_interval(h1).upper().isApprox(Eigen::Vector2d(1, 1), 1e-12));
  CHECK(to_interval(h2).upper().isApprox(Eigen::Vector2d(1, 1), 1e-12));

  const Ellipsoid stretched(Eigen::Vector2d::Zero(), Eigen::Vector2d(4, 1).asDiagonal());
  const auto boxes = ellipsoid_bounding_boxes(stretched);
  CHECK(to_interval(boxes.second).upper().isApprox(Eigen::Vector2d(0.5, 1), 1e-12));

  CHECK_THROWS_AS(Ellipsoid(Eigen::Vector2d::Zero(), -Eigen::Matrix2d::Identity()),
                  std::invalid_argument);
  Eigen::Matrix2d asym;
  asym << 1, 0.5, -0.5, 1;
  CHECK_THROWS_AS(Ellipsoid(Eigen::Vector2d::Zero(), asym), std::invalid_argument);
}

TEST_CASE("boundary points of a random ellipsoid land in both boxes") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 1.0);
  for (Eigen::Index n : {2, 3}) {
    const Eigen::MatrixXd Q = test_support::random_spd(rng, n);
    Eigen::VectorXd c(n);
    for (Eigen::Index i = 0; i < n; ++i) c[i] = g(rng);
    const Ellipsoid e(c, Q);
    const auto [h1, h2] = ellipsoid_bounding_boxes(e);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
    const Eigen::MatrixXd inv_sqrt = es.operatorInverseSqrt();
    for (int i = 0; i < 1000; ++i) {
      Eigen::VectorXd dir(n);
      for (Eigen::Index k = 0; k < n; ++k) dir[k] = g(rng);
      dir.normalize();
      const Eigen::VectorXd p = c + inv_sqrt * dir;  // on the boundary
      REQUIRE(contains_point(h1, p));
      REQUIRE(contains_point(h2, p));
    }
  }
}

TEST_CASE("enclosing zonotope of an ellipsoid contains interior samples") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Eigen::Index n : {2, 3}) {
    const Eigen::MatrixXd Q = test_support::random_spd(rng, n);
    const Ellipsoid e(Eigen::VectorXd::Zero(n), Q);
    const Zonotope z = ellipsoid_to_zonotope(e);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
    const Eigen::MatrixXd inv_sqrt = es.operatorInverseSqrt();
    for (int i = 0; i < 1000; ++i) {
      Eigen::VectorXd dir(n);
      for (Eigen::Index k = 0; k < n; ++k) dir[k] = g(rng);
      dir.normalize();
      const Eigen::VectorXd p = std::pow(u(rng), 1.0 / n) * (inv_sqrt * dir);
      REQUIRE(e.contains(p, 1e-9));
      REQUIRE(contains_point(z, p));
    }
  }
}

TEST_CASE("intersects is symmetric and reflexive on random pairs") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const Zonotope a = test_support::random_zonotope(rng, 2, 3);
    const Zonotope b = test_support::random_zonotope(rng, 2, 4);
    CHECK(intersects(a, b) == intersects(b, a));
    CHECK(intersects(a, a));
  }
}

TEST_SUITE_END();
