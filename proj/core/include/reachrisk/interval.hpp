#pragma once

#include <Eigen/Dense>
#include <vector>

#include "reachrisk/errors.hpp"

namespace reachrisk {

/// One-dimensional closed interval [lo, hi]. Arithmetic is the plain
/// (naive) interval arithmetic: no outward rounding, no dependency
/// tracking. Powers are computed as repeated multiplication, so
/// pow([-1,1], 2) = [-1,1], not [0,1].
struct ScalarInterval {
  double lo = 0.0;
  double hi = 0.0;

  ScalarInterval() = default;
  ScalarInterval(double lo, double hi) : lo(lo), hi(hi) {
    if (lo > hi) throw std::invalid_argument("ScalarInterval: lo > hi");
  }
  static ScalarInterval point(double v) { return {v, v}; }

  double mid() const { return 0.5 * (lo + hi); }
  double rad() const { return 0.5 * (hi - lo); }
  double width() const { return hi - lo; }
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
  bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
};

ScalarInterval operator+(ScalarInterval a, ScalarInterval b);
ScalarInterval operator-(ScalarInterval a, ScalarInterval b);
ScalarInterval operator-(ScalarInterval a);
ScalarInterval operator*(ScalarInterval a, ScalarInterval b);
ScalarInterval operator*(double a, ScalarInterval b);
ScalarInterval operator/(ScalarInterval a, ScalarInterval b);
ScalarInterval hull(ScalarInterval a, ScalarInterval b);
/// x^n by repeated multiplication (naive; matches term-wise enclosure).
ScalarInterval pow_nat(ScalarInterval x, int n);

/// Range enclosures of the usual transcendentals over an interval. These
/// are exact up to floating point (critical points are handled).
ScalarInterval interval_sin(ScalarInterval x);
ScalarInterval interval_cos(ScalarInterval x);
ScalarInterval interval_atan(ScalarInterval x);

/// Axis-aligned box in R^n: {x | lower <= x <= upper} componentwise.
class Interval {
public:
  Interval() = default;
  Interval(Eigen::VectorXd lower, Eigen::VectorXd upper);

  static Interval point(const Eigen::VectorXd& v) { return Interval(v, v); }
  static Interval zero(Eigen::Index dim) {
    return point(Eigen::VectorXd::Zero(dim));
  }
  static Interval unit_box(Eigen::Index dim) {
    return Interval(Eigen::VectorXd::Constant(dim, -1.0), Eigen::VectorXd::Constant(dim, 1.0));
  }
  static Interval centered(const Eigen::VectorXd& radii);
  static Interval concat(const Interval& a, const Interval& b);

  Eigen::Index dim() const { return lower_.size(); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  Eigen::VectorXd mid() const { return 0.5 * (lower_ + upper_); }
  Eigen::VectorXd radii() const { return 0.5 * (upper_ - lower_); }
  ScalarInterval at(Eigen::Index i) const { return {lower_[i], upper_[i]}; }

  bool contains(const Eigen::VectorXd& p, double tol = 0.0) const;
  bool contains(const Interval& other, double tol = 0.0) const;
  double max_abs_bound() const;

  /// Minkowski sum (componentwise interval addition).
  Interval operator+(const Interval& other) const;
  Interval operator-(const Eigen::VectorXd& offset) const;
  Interval shifted(const Eigen::VectorXd& offset) const;
  Interval hull_with(const Interval& other) const;

private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

}  // namespace reachrisk
