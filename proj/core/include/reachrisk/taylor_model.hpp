#pragma once

#include <vector>

#include "reachrisk/ellipsoid.hpp"
#include "reachrisk/polynomial.hpp"
#include "reachrisk/zonotope.hpp"

namespace reachrisk {

/// Polynomial over a box domain plus an interval remainder. The
/// represented set is {p(x) | x in domain} ⊕ remainder.
struct TaylorModel {
  Polynomial poly;
  Interval remainder;
  Interval domain;

  /// Scalar zero model over an empty domain.
  TaylorModel()
      : poly(0, 1), remainder(Interval::zero(1)), domain(Eigen::VectorXd(0), Eigen::VectorXd(0)) {}
  TaylorModel(Polynomial poly, Interval remainder, Interval domain);

  static TaylorModel constant(const Eigen::VectorXd& value);

  int codomain() const { return poly.codomain(); }
  Eigen::Index num_vars() const { return domain.dim(); }
  /// Interval enclosure of the represented set.
  Interval range() const;
  /// p(x) + a sample of the remainder at t in [-1,1]^dim.
  Eigen::VectorXd sample(const Eigen::VectorXd& x, const Eigen::VectorXd& t) const;
};

/// Lemma-style sum: same domain (bit-equal bounds), <p1+p2, I1 ⊕ I2>.
TaylorModel tm_add(const TaylorModel& a, const TaylorModel& b);

/// Product of scalar Taylor models over the same domain, truncated to
/// `truncate_to`. Remainder is
/// I1*Int(p2) ⊕ I2*Int(p1) ⊕ I1*I2 ⊕ Int(truncated terms).
TaylorModel tm_mul(const TaylorModel& a, const TaylorModel& b, int truncate_to);

/// a * recip(b), where recip expands 1/x about the midpoint of b's range
/// with a Lagrange remainder. Requires 0 outside b's range.
TaylorModel tm_div(const TaylorModel& a, const TaylorModel& b, int truncate_to);

TaylorModel tm_scale(const TaylorModel& a, double s);
TaylorModel tm_add_constant(const TaylorModel& a, const Eigen::VectorXd& offset);
/// Exact set sum of models over distinct domains, realized on the
/// concatenated domain.
TaylorModel tm_minkowski_concat(const TaylorModel& a, const TaylorModel& b);
TaylorModel tm_component(const TaylorModel& a, int i);

/// Order-1 model of a zonotope with at most n non-axial generators:
/// poly c + G1 x over [-1,1]^q, axial generators become the remainder.
TaylorModel zonotope_to_tm(const Zonotope& z);

/// Exact order-1 model of any zonotope over [-1,1]^m (no generator split).
TaylorModel tm_from_zonotope(const Zonotope& z);

/// Enclosing zonotope: linear terms become generators, nonlinear terms
/// and the remainder are boxed and appended as axial generators.
Zonotope tm_to_zonotope(const TaylorModel& tm);

/// E2TM: enclosing box pair -> zonotope -> order-1 Taylor model.
TaylorModel ellipsoid_to_tm(const Ellipsoid& e);

/// Substitutes `args` (scalar models over one shared domain) for the
/// variables of `p` and evaluates with Taylor-model arithmetic truncated
/// to `truncate_to`. Coefficients below `prune_eps` are folded into the
/// remainder. The caller is responsible for `p` being a valid enclosure
/// polynomial wherever the args range.
TaylorModel tm_compose(const Polynomial& p, const std::vector<TaylorModel>& args,
                       int truncate_to, double prune_eps = 1e-14);

}  // namespace reachrisk
