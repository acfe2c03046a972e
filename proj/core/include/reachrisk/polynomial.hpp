#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "reachrisk/interval.hpp"

namespace reachrisk {

/// One monomial of a vector-valued polynomial: coeff * prod_i x_i^exponents[i].
struct Monomial {
  std::vector<int> exponents;
  Eigen::VectorXd coeff;

  int total_degree() const {
    int d = 0;
    for (int e : exponents) d += e;
    return d;
  }
};

/// Vector-valued multivariate polynomial in canonical form: terms are
/// sorted by exponent tuple and no two terms share one.
class Polynomial {
public:
  Polynomial(int num_vars, int codomain);
  static Polynomial constant(int num_vars, const Eigen::VectorXd& value);
  /// c + A x
  static Polynomial affine(const Eigen::VectorXd& c, const Eigen::MatrixXd& A);

  int num_vars() const { return num_vars_; }
  int codomain() const { return codomain_; }
  int max_order() const;
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const std::vector<int>& exponents, const Eigen::VectorXd& coeff);
  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial scaled(double s) const;
  Polynomial component(int i) const;
  /// Same polynomial over a wider variable tuple; old variable i becomes
  /// variable i + offset.
  Polynomial extended(int new_num_vars, int offset) const;
  /// (terms with total degree <= order, terms above).
  std::pair<Polynomial, Polynomial> split_by_degree(int order) const;
  /// Remove terms whose coefficients are all below eps in magnitude and
  /// return their interval enclosure over `domain` so the caller can fold
  /// it into a remainder.
  Interval prune(double eps, const Interval& domain);

private:
  void canonicalize();

  int num_vars_;
  int codomain_;
  std::vector<Monomial> terms_;
};

/// Term-wise interval evaluation of p over the box (naive interval
/// arithmetic; powers by repeated multiplication).
Interval int_enclose(const Polynomial& p, const Interval& domain);

/// Product of two scalar polynomials.
Polynomial multiply(const Polynomial& a, const Polynomial& b);

}  // namespace reachrisk
