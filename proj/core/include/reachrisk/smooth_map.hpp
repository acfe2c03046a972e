#pragma once

#include <functional>
#include <vector>

#include "reachrisk/taylor_model.hpp"

namespace reachrisk {

/// Mixed-partial multi-index, one entry per input variable.
using MultiIndex = std::vector<int>;

/// A smooth map with point evaluation plus mixed partial derivatives, in
/// both point and interval form. Interval derivatives are what make the
/// Taylor remainder enclosures sound; maps built from an evaluator alone
/// fall back to central finite differences with an uncertainty factor.
class SmoothMap {
public:
  using EvalFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using DerivFn = std::function<Eigen::VectorXd(const MultiIndex&, const Eigen::VectorXd&)>;
  using IntervalDerivFn = std::function<Interval(const MultiIndex&, const Interval&)>;

  static SmoothMap analytic(int arity, int codomain, EvalFn eval, DerivFn deriv,
                            IntervalDerivFn interval_deriv, int max_order);
  /// Finite-difference fallback: derivatives up to order 3, remainder
  /// enclosures widened by `inflation`.
  static SmoothMap from_evaluator(int arity, int codomain, EvalFn eval,
                                  double inflation = 1.05);
  /// x -> A x + b.
  static SmoothMap linear(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

  int arity() const { return arity_; }
  int codomain() const { return codomain_; }
  int max_derivative_order() const { return max_order_; }
  double remainder_inflation() const { return inflation_; }

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  Eigen::VectorXd derivative(const MultiIndex& index, const Eigen::VectorXd& x) const;
  Interval interval_derivative(const MultiIndex& index, const Interval& box) const;

private:
  SmoothMap(int arity, int codomain, EvalFn eval, DerivFn deriv, IntervalDerivFn ideriv,
            int max_order, double inflation);

  int arity_;
  int codomain_;
  EvalFn eval_;
  DerivFn deriv_;
  IntervalDerivFn ideriv_;
  int max_order_;
  double inflation_;
};

/// Central finite-difference estimate of the mixed partial D^index f at
/// `center` with per-variable step `step`. Orders above 3 are rejected.
Eigen::VectorXd derivatives_by_divided_differences(const SmoothMap::EvalFn& f, int arity,
                                                   const MultiIndex& index,
                                                   const Eigen::VectorXd& center,
                                                   double step = 1e-4);

/// Order-kappa Taylor model of `map` about `center`, valid on `domain`.
/// The polynomial is written in deviation coordinates, so the returned
/// model's domain is `domain - center`. The remainder encloses every
/// order-(kappa+1) Lagrange term with interval derivatives over `domain`.
TaylorModel taylor_expand(const SmoothMap& map, const Eigen::VectorXd& center,
                          const Interval& domain, int order);

/// Calls fn for every multi-index with the given total degree.
void for_each_multi_index(int arity, int total_degree,
                          const std::function<void(const MultiIndex&)>& fn);

}  // namespace reachrisk
