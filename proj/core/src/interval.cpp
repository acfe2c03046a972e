#include "reachrisk/interval.hpp"

#include <algorithm>
#include <cmath>

namespace reachrisk {

ScalarInterval operator+(ScalarInterval a, ScalarInterval b) { return {a.lo + b.lo, a.hi + b.hi}; }

ScalarInterval operator-(ScalarInterval a, ScalarInterval b) { return {a.lo - b.hi, a.hi - b.lo}; }

ScalarInterval operator-(ScalarInterval a) { return {-a.hi, -a.lo}; }

ScalarInterval operator*(ScalarInterval a, ScalarInterval b) {
  const double p1 = a.lo * b.lo;
  const double p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo;
  const double p4 = a.hi * b.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)),
          std::max(std::max(p1, p2), std::max(p3, p4))};
}

ScalarInterval operator*(double a, ScalarInterval b) {
  if (a >= 0.0) return {a * b.lo, a * b.hi};
  return {a * b.hi, a * b.lo};
}

ScalarInterval operator/(ScalarInterval a, ScalarInterval b) {
  if (b.contains_zero()) throw SingularDivisionError("interval division by range containing 0");
  return a * ScalarInterval{1.0 / b.hi, 1.0 / b.lo};
}

ScalarInterval hull(ScalarInterval a, ScalarInterval b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

ScalarInterval pow_nat(ScalarInterval x, int n) {
  if (n < 0) throw std::invalid_argument("pow_nat: negative exponent");
  ScalarInterval out = ScalarInterval::point(1.0);
  for (int i = 0; i < n; ++i) out = out * x;
  return out;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// Range of sin over [lo, hi]: endpoint values plus any interior extrema.
ScalarInterval sin_range(double lo, double hi) {
  if (hi - lo >= 2.0 * kPi) return {-1.0, 1.0};
  double mn = std::min(std::sin(lo), std::sin(hi));
  double mx = std::max(std::sin(lo), std::sin(hi));
  // maxima at pi/2 + 2k*pi, minima at -pi/2 + 2k*pi
  const double kmax = std::ceil((lo - kPi / 2.0) / (2.0 * kPi));
  if (kPi / 2.0 + 2.0 * kPi * kmax <= hi) mx = 1.0;
  const double kmin = std::ceil((lo + kPi / 2.0) / (2.0 * kPi));
  if (-kPi / 2.0 + 2.0 * kPi * kmin <= hi) mn = -1.0;
  return {mn, mx};
}

}  // namespace

ScalarInterval interval_sin(ScalarInterval x) { return sin_range(x.lo, x.hi); }

ScalarInterval interval_cos(ScalarInterval x) { return sin_range(x.lo + kPi / 2.0, x.hi + kPi / 2.0); }

ScalarInterval interval_atan(ScalarInterval x) { return {std::atan(x.lo), std::atan(x.hi)}; }

Interval::Interval(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size())
    throw std::invalid_argument("Interval: bound dimensions differ");
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] <= upper_[i]))
      throw std::invalid_argument("Interval: lower > upper at dimension " + std::to_string(i));
  }
}

Interval Interval::centered(const Eigen::VectorXd& radii) {
  return Interval(-radii.cwiseAbs(), radii.cwiseAbs());
}

Interval Interval::concat(const Interval& a, const Interval& b) {
  Eigen::VectorXd lo(a.dim() + b.dim());
  Eigen::VectorXd hi(a.dim() + b.dim());
  lo << a.lower_, b.lower_;
  hi << a.upper_, b.upper_;
  return Interval(std::move(lo), std::move(hi));
}

bool Interval::contains(const Eigen::VectorXd& p, double tol) const {
  if (p.size() != dim()) return false;
  return (p.array() >= lower_.array() - tol).all() && (p.array() <= upper_.array() + tol).all();
}

bool Interval::contains(const Interval& other, double tol) const {
  return (other.lower_.array() >= lower_.array() - tol).all() &&
         (other.upper_.array() <= upper_.array() + tol).all();
}

double Interval::max_abs_bound() const {
  if (dim() == 0) return 0.0;
  return std::max(lower_.cwiseAbs().maxCoeff(), upper_.cwiseAbs().maxCoeff());
}

Interval Interval::operator+(const Interval& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("Interval sum: dimension mismatch");
  return Interval(lower_ + other.lower_, upper_ + other.upper_);
}

Interval Interval::operator-(const Eigen::VectorXd& offset) const {
  return Interval(lower_ - offset, upper_ - offset);
}

Interval Interval::shifted(const Eigen::VectorXd& offset) const {
  return Interval(lower_ + offset, upper_ + offset);
}

Interval Interval::hull_with(const Interval& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("Interval hull: dimension mismatch");
  return Interval(lower_.cwiseMin(other.lower_), upper_.cwiseMax(other.upper_));
}

}  // namespace reachrisk
