#include "reachrisk/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace reachrisk {

Polynomial::Polynomial(int num_vars, int codomain) : num_vars_(num_vars), codomain_(codomain) {
  if (num_vars < 0 || codomain < 1) throw std::invalid_argument("Polynomial: bad dimensions");
}

Polynomial Polynomial::constant(int num_vars, const Eigen::VectorXd& value) {
  Polynomial p(num_vars, static_cast<int>(value.size()));
  p.add_term(std::vector<int>(static_cast<size_t>(num_vars), 0), value);
  return p;
}

Polynomial Polynomial::affine(const Eigen::VectorXd& c, const Eigen::MatrixXd& A) {
  if (A.rows() != c.size()) throw std::invalid_argument("Polynomial::affine: shape mismatch");
  Polynomial p(static_cast<int>(A.cols()), static_cast<int>(c.size()));
  p.add_term(std::vector<int>(static_cast<size_t>(A.cols()), 0), c);
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    std::vector<int> e(static_cast<size_t>(A.cols()), 0);
    e[static_cast<size_t>(j)] = 1;
    p.add_term(e, A.col(j));
  }
  return p;
}

int Polynomial::max_order() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.total_degree());
  return d;
}

void Polynomial::add_term(const std::vector<int>& exponents, const Eigen::VectorXd& coeff) {
  if (static_cast<int>(exponents.size()) != num_vars_)
    throw std::invalid_argument("Polynomial::add_term: exponent arity mismatch");
  if (static_cast<int>(coeff.size()) != codomain_)
    throw std::invalid_argument("Polynomial::add_term: coefficient size mismatch");
  for (int e : exponents)
    if (e < 0) throw std::invalid_argument("Polynomial::add_term: negative exponent");
  if (coeff.isZero(0.0)) return;
  terms_.push_back({exponents, coeff});
  canonicalize();
}

void Polynomial::canonicalize() {
  std::stable_sort(terms_.begin(), terms_.end(), [](const Monomial& a, const Monomial& b) {
    return a.exponents < b.exponents;
  });
  std::vector<Monomial> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exponents == t.exponents) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Monomial& t) { return t.coeff.isZero(0.0); }),
               merged.end());
  terms_ = std::move(merged);
}

Eigen::VectorXd Polynomial::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != num_vars_) throw std::invalid_argument("Polynomial::evaluate: arity mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(codomain_);
  for (const auto& t : terms_) {
    double m = 1.0;
    for (int i = 0; i < num_vars_; ++i)
      for (int k = 0; k < t.exponents[static_cast<size_t>(i)]; ++k) m *= x[i];
    out += m * t.coeff;
  }
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_ || other.codomain_ != codomain_)
    throw std::invalid_argument("Polynomial sum: shape mismatch");
  Polynomial out = *this;
  out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
  out.canonicalize();
  return out;
}

Polynomial Polynomial::scaled(double s) const {
  Polynomial out = *this;
  if (s == 0.0) {
    out.terms_.clear();
    return out;
  }
  for (auto& t : out.terms_) t.coeff *= s;
  return out;
}

Polynomial Polynomial::component(int i) const {
  if (i < 0 || i >= codomain_) throw std::invalid_argument("Polynomial::component: out of range");
  Polynomial out(num_vars_, 1);
  for (const auto& t : terms_) {
    if (t.coeff[i] != 0.0)
      out.terms_.push_back({t.exponents, Eigen::VectorXd::Constant(1, t.coeff[i])});
  }
  return out;
}

Polynomial Polynomial::extended(int new_num_vars, int offset) const {
  if (offset < 0 || offset + num_vars_ > new_num_vars)
    throw std::invalid_argument("Polynomial::extended: variables do not fit");
  Polynomial out(new_num_vars, codomain_);
  for (const auto& t : terms_) {
    std::vector<int> e(static_cast<size_t>(new_num_vars), 0);
    std::copy(t.exponents.begin(), t.exponents.end(), e.begin() + offset);
    out.terms_.push_back({std::move(e), t.coeff});
  }
  out.canonicalize();
  return out;
}

std::pair<Polynomial, Polynomial> Polynomial::split_by_degree(int order) const {
  Polynomial low(num_vars_, codomain_);
  Polynomial high(num_vars_, codomain_);
  for (const auto& t : terms_) {
    (t.total_degree() <= order ? low : high).terms_.push_back(t);
  }
  return {std::move(low), std::move(high)};
}

Interval Polynomial::prune(double eps, const Interval& domain) {
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(codomain_);
  Eigen::VectorXd hi = Eigen::VectorXd::Zero(codomain_);
  std::vector<Monomial> kept;
  Polynomial dropped(num_vars_, codomain_);
  for (auto& t : terms_) {
    if (t.coeff.cwiseAbs().maxCoeff() < eps) {
      dropped.terms_.push_back(std::move(t));
    } else {
      kept.push_back(std::move(t));
    }
  }
  terms_ = std::move(kept);
  if (dropped.terms_.empty()) return Interval(lo, hi);
  return int_enclose(dropped, domain);
}

Interval int_enclose(const Polynomial& p, const Interval& domain) {
  if (domain.dim() != p.num_vars()) throw std::invalid_argument("int_enclose: domain arity mismatch");
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(p.codomain());
  Eigen::VectorXd hi = Eigen::VectorXd::Zero(p.codomain());
  for (const auto& t : p.terms()) {
    ScalarInterval m = ScalarInterval::point(1.0);
    for (int i = 0; i < p.num_vars(); ++i) {
      const int e = t.exponents[static_cast<size_t>(i)];
      if (e > 0) m = m * pow_nat(domain.at(i), e);
    }
    for (int d = 0; d < p.codomain(); ++d) {
      const ScalarInterval contrib = t.coeff[d] * m;
      lo[d] += contrib.lo;
      hi[d] += contrib.hi;
    }
  }
  return Interval(lo, hi);
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars() != b.num_vars()) throw std::invalid_argument("multiply: arity mismatch");
  if (a.codomain() != 1 || b.codomain() != 1)
    throw std::invalid_argument("multiply: scalar polynomials required");
  Polynomial out(a.num_vars(), 1);
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      std::vector<int> e(ta.exponents.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ta.exponents[i] + tb.exponents[i];
      out.add_term(e, ta.coeff.cwiseProduct(tb.coeff));
    }
  }
  return out;
}

}  // namespace reachrisk
