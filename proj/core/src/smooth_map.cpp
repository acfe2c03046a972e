#include "reachrisk/smooth_map.hpp"

#include <cmath>

#include "reachrisk/errors.hpp"

namespace reachrisk {

namespace {

int total_degree(const MultiIndex& index) {
  int d = 0;
  for (int e : index) d += e;
  return d;
}

double factorial_of(const MultiIndex& index) {
  double f = 1.0;
  for (int e : index)
    for (int k = 2; k <= e; ++k) f *= k;
  return f;
}

void enumerate(int arity, int remaining, MultiIndex& current, int pos,
               const std::function<void(const MultiIndex&)>& fn) {
  if (pos == arity - 1) {
    current[static_cast<size_t>(pos)] = remaining;
    fn(current);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    current[static_cast<size_t>(pos)] = e;
    enumerate(arity, remaining - e, current, pos + 1, fn);
  }
}

}  // namespace

void for_each_multi_index(int arity, int total_degree,
                          const std::function<void(const MultiIndex&)>& fn) {
  if (arity == 0) {
    if (total_degree == 0) fn(MultiIndex{});
    return;
  }
  MultiIndex current(static_cast<size_t>(arity), 0);
  enumerate(arity, total_degree, current, 0, fn);
}

SmoothMap::SmoothMap(int arity, int codomain, EvalFn eval, DerivFn deriv, IntervalDerivFn ideriv,
                     int max_order, double inflation)
    : arity_(arity),
      codomain_(codomain),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      ideriv_(std::move(ideriv)),
      max_order_(max_order),
      inflation_(inflation) {
  if (arity_ < 0 || codomain_ < 1) throw std::invalid_argument("SmoothMap: bad dimensions");
}

SmoothMap SmoothMap::analytic(int arity, int codomain, EvalFn eval, DerivFn deriv,
                              IntervalDerivFn interval_deriv, int max_order) {
  return SmoothMap(arity, codomain, std::move(eval), std::move(deriv),
                   std::move(interval_deriv), max_order, 1.0);
}

SmoothMap SmoothMap::from_evaluator(int arity, int codomain, EvalFn eval, double inflation) {
  EvalFn shared = std::move(eval);
  DerivFn deriv = [shared, arity](const MultiIndex& index, const Eigen::VectorXd& x) {
    return derivatives_by_divided_differences(shared, arity, index, x);
  };
  IntervalDerivFn ideriv = [shared, arity](const MultiIndex& index, const Interval& box) {
    const Eigen::VectorXd v = derivatives_by_divided_differences(shared, arity, index, box.mid());
    return Interval::point(v);
  };
  return SmoothMap(arity, codomain, shared, std::move(deriv), std::move(ideriv), 3, inflation);
}

SmoothMap SmoothMap::linear(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const int arity = static_cast<int>(A.cols());
  const int codomain = static_cast<int>(A.rows());
  if (b.size() != A.rows()) throw std::invalid_argument("SmoothMap::linear: shape mismatch");
  EvalFn eval = [A, b](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x + b; };
  DerivFn deriv = [A, b, codomain](const MultiIndex& index, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const int d = total_degree(index);
    if (d == 0) return A * x + b;
    if (d == 1) {
      for (size_t i = 0; i < index.size(); ++i)
        if (index[i] == 1) return A.col(static_cast<Eigen::Index>(i));
    }
    return Eigen::VectorXd::Zero(codomain);
  };
  IntervalDerivFn ideriv = [A, b, codomain](const MultiIndex& index, const Interval& box) {
    const int d = total_degree(index);
    if (d == 0) {
      const Eigen::VectorXd c = A * box.mid() + b;
      const Eigen::VectorXd r = A.cwiseAbs() * box.radii();
      return Interval(c - r, c + r);
    }
    if (d == 1) {
      for (size_t i = 0; i < index.size(); ++i)
        if (index[i] == 1) return Interval::point(A.col(static_cast<Eigen::Index>(i)));
    }
    return Interval::zero(codomain);
  };
  return SmoothMap(arity, codomain, std::move(eval), std::move(deriv), std::move(ideriv),
                   1000, 1.0);
}

Eigen::VectorXd SmoothMap::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != arity_) throw std::invalid_argument("SmoothMap: arity mismatch");
  return eval_(x);
}

Eigen::VectorXd SmoothMap::derivative(const MultiIndex& index, const Eigen::VectorXd& x) const {
  if (static_cast<int>(index.size()) != arity_)
    throw std::invalid_argument("SmoothMap::derivative: index arity mismatch");
  if (total_degree(index) > max_order_)
    throw UnsupportedOrderError("SmoothMap: derivative order " +
                                std::to_string(total_degree(index)) + " not available");
  return deriv_(index, x);
}

Interval SmoothMap::interval_derivative(const MultiIndex& index, const Interval& box) const {
  if (static_cast<int>(index.size()) != arity_)
    throw std::invalid_argument("SmoothMap::interval_derivative: index arity mismatch");
  if (total_degree(index) > max_order_)
    throw UnsupportedOrderError("SmoothMap: derivative order " +
                                std::to_string(total_degree(index)) + " not available");
  return ideriv_(index, box);
}

Eigen::VectorXd derivatives_by_divided_differences(const SmoothMap::EvalFn& f, int arity,
                                                   const MultiIndex& index,
                                                   const Eigen::VectorXd& center, double step) {
  if (static_cast<int>(index.size()) != arity)
    throw std::invalid_argument("divided differences: index arity mismatch");
  const int d = total_degree(index);
  if (d > 3)
    throw UnsupportedOrderError("divided differences support order <= 3, got " +
                                std::to_string(d));
  if (d == 0) return f(center);

  int var = -1;
  for (size_t i = 0; i < index.size(); ++i) {
    if (index[i] > 0) {
      var = static_cast<int>(i);
      break;
    }
  }
  MultiIndex lower = index;
  --lower[static_cast<size_t>(var)];
  Eigen::VectorXd xp = center;
  Eigen::VectorXd xm = center;
  xp[var] += step;
  xm[var] -= step;
  return (derivatives_by_divided_differences(f, arity, lower, xp, step) -
          derivatives_by_divided_differences(f, arity, lower, xm, step)) /
         (2.0 * step);
}

TaylorModel taylor_expand(const SmoothMap& map, const Eigen::VectorXd& center,
                          const Interval& domain, int order) {
  if (domain.dim() != map.arity()) throw std::invalid_argument("taylor_expand: domain arity mismatch");
  if (!domain.contains(center, 1e-12))
    throw std::invalid_argument("taylor_expand: center outside domain");
  if (order < 0) throw std::invalid_argument("taylor_expand: negative order");
  if (order + 1 > map.max_derivative_order())
    throw UnsupportedOrderError("taylor_expand: order " + std::to_string(order) +
                                " needs derivatives of order " + std::to_string(order + 1));

  const int arity = map.arity();
  const int n = map.codomain();
  Polynomial poly(arity, n);
  for (int d = 0; d <= order; ++d) {
    for_each_multi_index(arity, d, [&](const MultiIndex& J) {
      const Eigen::VectorXd coeff = map.derivative(J, center) / factorial_of(J);
      if (!coeff.isZero(0.0)) poly.add_term(J, coeff);
    });
  }

  const Interval deviation = domain - center;
  Eigen::VectorXd rem_lo = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd rem_hi = Eigen::VectorXd::Zero(n);
  for_each_multi_index(arity, order + 1, [&](const MultiIndex& J) {
    const Interval dJ = map.interval_derivative(J, domain);
    const double fact = factorial_of(J);
    ScalarInterval mono = ScalarInterval::point(1.0);
    for (int i = 0; i < arity; ++i)
      if (J[static_cast<size_t>(i)] > 0) mono = mono * pow_nat(deviation.at(i), J[static_cast<size_t>(i)]);
    for (int d = 0; d < n; ++d) {
      const ScalarInterval c = ScalarInterval{dJ.lower()[d] / fact, dJ.upper()[d] / fact} * mono;
      rem_lo[d] += c.lo;
      rem_hi[d] += c.hi;
    }
  });

  Interval remainder(rem_lo, rem_hi);
  if (map.remainder_inflation() != 1.0) {
    const Eigen::VectorXd mid = remainder.mid();
    const Eigen::VectorXd rad = map.remainder_inflation() * remainder.radii();
    remainder = Interval(mid - rad, mid + rad);
  }
  return TaylorModel(std::move(poly), std::move(remainder), deviation);
}

}  // namespace reachrisk
