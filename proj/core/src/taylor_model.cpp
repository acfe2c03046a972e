#include "reachrisk/taylor_model.hpp"

#include <cmath>

#include "reachrisk/errors.hpp"

namespace reachrisk {

namespace {

void require_same_domain(const TaylorModel& a, const TaylorModel& b, const char* op) {
  if (a.domain.dim() != b.domain.dim() || a.domain.lower() != b.domain.lower() ||
      a.domain.upper() != b.domain.upper())
    throw std::invalid_argument(std::string(op) + ": domains differ");
}

ScalarInterval as_scalar(const Interval& iv) {
  if (iv.dim() != 1) throw std::invalid_argument("expected scalar interval");
  return iv.at(0);
}

}  // namespace

TaylorModel::TaylorModel(Polynomial poly_, Interval remainder_, Interval domain_)
    : poly(std::move(poly_)), remainder(std::move(remainder_)), domain(std::move(domain_)) {
  if (remainder.dim() != poly.codomain())
    throw std::invalid_argument("TaylorModel: remainder dimension mismatch");
  if (domain.dim() != poly.num_vars())
    throw std::invalid_argument("TaylorModel: domain arity mismatch");
}

TaylorModel TaylorModel::constant(const Eigen::VectorXd& value) {
  return TaylorModel(Polynomial::constant(0, value), Interval::zero(value.size()),
                     Interval(Eigen::VectorXd(0), Eigen::VectorXd(0)));
}

Interval TaylorModel::range() const { return int_enclose(poly, domain) + remainder; }

Eigen::VectorXd TaylorModel::sample(const Eigen::VectorXd& x, const Eigen::VectorXd& t) const {
  Eigen::VectorXd v = poly.evaluate(x);
  const Eigen::VectorXd mid = remainder.mid();
  const Eigen::VectorXd rad = remainder.radii();
  for (int d = 0; d < codomain(); ++d) v[d] += mid[d] + t[d] * rad[d];
  return v;
}

TaylorModel tm_add(const TaylorModel& a, const TaylorModel& b) {
  require_same_domain(a, b, "tm_add");
  if (a.codomain() != b.codomain()) throw std::invalid_argument("tm_add: codomain mismatch");
  return TaylorModel(a.poly + b.poly, a.remainder + b.remainder, a.domain);
}

TaylorModel tm_mul(const TaylorModel& a, const TaylorModel& b, int truncate_to) {
  require_same_domain(a, b, "tm_mul");
  if (a.codomain() != 1 || b.codomain() != 1)
    throw std::invalid_argument("tm_mul: scalar codomains required");
  if (truncate_to < 0) throw std::invalid_argument("tm_mul: negative truncation order");

  auto [low, high] = multiply(a.poly, b.poly).split_by_degree(truncate_to);

  const ScalarInterval ia = as_scalar(a.remainder);
  const ScalarInterval ib = as_scalar(b.remainder);
  const ScalarInterval ra = as_scalar(int_enclose(a.poly, a.domain));
  const ScalarInterval rb = as_scalar(int_enclose(b.poly, b.domain));
  ScalarInterval rem = ia * rb + ib * ra + ia * ib;
  if (!high.is_zero()) rem = rem + as_scalar(int_enclose(high, a.domain));

  return TaylorModel(std::move(low), Interval(Eigen::VectorXd::Constant(1, rem.lo),
                                              Eigen::VectorXd::Constant(1, rem.hi)),
                     a.domain);
}

TaylorModel tm_div(const TaylorModel& a, const TaylorModel& b, int truncate_to) {
  require_same_domain(a, b, "tm_div");
  if (b.codomain() != 1) throw std::invalid_argument("tm_div: divisor must be scalar");

  const ScalarInterval range_b = as_scalar(b.range());
  if (range_b.contains_zero())
    throw SingularDivisionError("tm_div: divisor range contains zero");
  const double x0 = range_b.mid();

  // recip(x) = sum_{j<=k} (-1)^j (x-x0)^j / x0^{j+1}  + Lagrange remainder.
  const int k = truncate_to;
  TaylorModel shifted = tm_add_constant(b, Eigen::VectorXd::Constant(1, -x0));
  TaylorModel recip = TaylorModel(
      Polynomial::constant(b.poly.num_vars(), Eigen::VectorXd::Constant(1, 1.0 / x0)),
      Interval::zero(1), b.domain);
  TaylorModel power = TaylorModel(
      Polynomial::constant(b.poly.num_vars(), Eigen::VectorXd::Constant(1, 1.0)),
      Interval::zero(1), b.domain);
  double sign = 1.0;
  double x0_pow = x0;
  for (int j = 1; j <= k; ++j) {
    power = tm_mul(power, shifted, k);
    sign = -sign;
    x0_pow *= x0;
    recip = tm_add(recip, tm_scale(power, sign / x0_pow));
  }
  // Remainder of the reciprocal expansion over the divisor's range:
  // (-1)^{k+1} (x-x0)^{k+1} / xi^{k+2}, xi in range_b.
  const ScalarInterval dev = range_b - ScalarInterval::point(x0);
  ScalarInterval lag = pow_nat(dev, k + 1) / pow_nat(range_b, k + 2);
  if ((k + 1) % 2 == 1) lag = -lag;
  recip = TaylorModel(recip.poly,
                      recip.remainder + Interval(Eigen::VectorXd::Constant(1, lag.lo),
                                                 Eigen::VectorXd::Constant(1, lag.hi)),
                      recip.domain);

  return tm_mul(a, recip, truncate_to);
}

TaylorModel tm_scale(const TaylorModel& a, double s) {
  Eigen::VectorXd lo = s * a.remainder.lower();
  Eigen::VectorXd hi = s * a.remainder.upper();
  if (s < 0.0) std::swap(lo, hi);
  return TaylorModel(a.poly.scaled(s), Interval(std::move(lo), std::move(hi)), a.domain);
}

TaylorModel tm_add_constant(const TaylorModel& a, const Eigen::VectorXd& offset) {
  Polynomial p = a.poly;
  p.add_term(std::vector<int>(static_cast<size_t>(p.num_vars()), 0), offset);
  return TaylorModel(std::move(p), a.remainder, a.domain);
}

TaylorModel tm_minkowski_concat(const TaylorModel& a, const TaylorModel& b) {
  if (a.codomain() != b.codomain())
    throw std::invalid_argument("tm_minkowski_concat: codomain mismatch");
  const int qa = a.poly.num_vars();
  const int qb = b.poly.num_vars();
  Polynomial p = a.poly.extended(qa + qb, 0) + b.poly.extended(qa + qb, qa);
  return TaylorModel(std::move(p), a.remainder + b.remainder,
                     Interval::concat(a.domain, b.domain));
}

TaylorModel tm_component(const TaylorModel& a, int i) {
  return TaylorModel(a.poly.component(i),
                     Interval(Eigen::VectorXd::Constant(1, a.remainder.lower()[i]),
                              Eigen::VectorXd::Constant(1, a.remainder.upper()[i])),
                     a.domain);
}

namespace {

// Columns with zero entries are ignored, single-entry columns are axial.
struct GeneratorSplit {
  std::vector<Eigen::Index> non_axial;
  Eigen::VectorXd axial_sums;
};

GeneratorSplit split_generators(const Zonotope& z) {
  GeneratorSplit out;
  out.axial_sums = Eigen::VectorXd::Zero(z.dim());
  for (Eigen::Index j = 0; j < z.num_generators(); ++j) {
    const auto col = z.generators().col(j);
    int nonzeros = 0;
    Eigen::Index row = -1;
    for (Eigen::Index i = 0; i < z.dim(); ++i) {
      if (col[i] != 0.0) {
        ++nonzeros;
        row = i;
      }
    }
    if (nonzeros == 0) continue;
    if (nonzeros == 1) {
      out.axial_sums[row] += std::abs(col[row]);
    } else {
      out.non_axial.push_back(j);
    }
  }
  return out;
}

}  // namespace

TaylorModel zonotope_to_tm(const Zonotope& z) {
  const GeneratorSplit split = split_generators(z);
  const Eigen::Index q = static_cast<Eigen::Index>(split.non_axial.size());
  if (q > z.dim())
    throw std::invalid_argument("zonotope_to_tm: more non-axial generators than dimensions");
  Eigen::MatrixXd G1(z.dim(), q);
  for (Eigen::Index j = 0; j < q; ++j)
    G1.col(j) = z.generators().col(split.non_axial[static_cast<size_t>(j)]);
  return TaylorModel(Polynomial::affine(z.center(), G1), Interval::centered(split.axial_sums),
                     Interval::unit_box(q));
}

TaylorModel tm_from_zonotope(const Zonotope& z) {
  return TaylorModel(Polynomial::affine(z.center(), z.generators()),
                     Interval::zero(z.dim()), Interval::unit_box(z.num_generators()));
}

Zonotope tm_to_zonotope(const TaylorModel& tm) {
  auto [linear, nonlinear] = tm.poly.split_by_degree(1);

  const Eigen::VectorXd mu = tm.domain.mid();
  const Eigen::VectorXd rho = tm.domain.radii();
  const int n = tm.codomain();
  const int q = tm.poly.num_vars();

  Eigen::VectorXd center = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, q);
  for (const auto& t : linear.terms()) {
    const int deg = t.total_degree();
    if (deg == 0) {
      center += t.coeff;
    } else {
      for (int i = 0; i < q; ++i) {
        if (t.exponents[static_cast<size_t>(i)] == 1) {
          J.col(i) += t.coeff;
          break;
        }
      }
    }
  }
  center += J * mu;

  Eigen::VectorXd axial = Eigen::VectorXd::Zero(n);
  if (!nonlinear.is_zero()) {
    const Interval box = int_enclose(nonlinear, tm.domain);
    center += box.mid();
    axial += box.radii();
  }
  center += tm.remainder.mid();
  axial += tm.remainder.radii();

  const Eigen::MatrixXd lin = J * rho.asDiagonal();
  std::vector<Eigen::Index> lin_cols;
  for (Eigen::Index j = 0; j < lin.cols(); ++j)
    if (!lin.col(j).isZero(0.0)) lin_cols.push_back(j);
  Eigen::Index extra = 0;
  for (int i = 0; i < n; ++i)
    if (axial[i] > 0.0) ++extra;
  Eigen::MatrixXd G(n, static_cast<Eigen::Index>(lin_cols.size()) + extra);
  G.setZero();
  for (size_t j = 0; j < lin_cols.size(); ++j)
    G.col(static_cast<Eigen::Index>(j)) = lin.col(lin_cols[j]);
  Eigen::Index col = static_cast<Eigen::Index>(lin_cols.size());
  for (int i = 0; i < n; ++i) {
    if (axial[i] > 0.0) G(i, col++) = axial[i];
  }
  return Zonotope(std::move(center), std::move(G));
}

TaylorModel ellipsoid_to_tm(const Ellipsoid& e) {
  return zonotope_to_tm(ellipsoid_to_zonotope(e));
}

TaylorModel tm_compose(const Polynomial& p, const std::vector<TaylorModel>& args,
                       int truncate_to, double prune_eps) {
  if (static_cast<int>(args.size()) != p.num_vars())
    throw std::invalid_argument("tm_compose: argument count mismatch");
  for (const auto& a : args) {
    if (a.codomain() != 1) throw std::invalid_argument("tm_compose: arguments must be scalar");
    if (!args.empty()) require_same_domain(args.front(), a, "tm_compose");
  }
  const Interval domain = args.empty() ? Interval(Eigen::VectorXd(0), Eigen::VectorXd(0))
                                       : args.front().domain;
  const int q = static_cast<int>(domain.dim());

  // Powers of each argument, computed on demand.
  std::vector<std::vector<TaylorModel>> powers(args.size());
  const TaylorModel one(Polynomial::constant(q, Eigen::VectorXd::Constant(1, 1.0)),
                        Interval::zero(1), domain);
  auto power_of = [&](size_t i, int e) -> const TaylorModel& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(one);
    while (static_cast<int>(cache.size()) <= e)
      cache.push_back(tm_mul(cache.back(), args[i], truncate_to));
    return cache[static_cast<size_t>(e)];
  };

  const int n_out = p.codomain();
  Polynomial out_poly(q, n_out);
  Eigen::VectorXd rem_lo = Eigen::VectorXd::Zero(n_out);
  Eigen::VectorXd rem_hi = Eigen::VectorXd::Zero(n_out);

  for (const auto& t : p.terms()) {
    TaylorModel term = one;
    for (size_t i = 0; i < args.size(); ++i) {
      const int e = t.exponents[i];
      if (e > 0) term = tm_mul(term, power_of(i, e), truncate_to);
    }
    for (const auto& mono : term.poly.terms()) out_poly.add_term(mono.exponents, t.coeff * mono.coeff[0]);
    const ScalarInterval tr = as_scalar(term.remainder);
    for (int d = 0; d < n_out; ++d) {
      const ScalarInterval c = t.coeff[d] * tr;
      rem_lo[d] += c.lo;
      rem_hi[d] += c.hi;
    }
  }

  Interval rem(rem_lo, rem_hi);
  rem = rem + out_poly.prune(prune_eps, domain);
  return TaylorModel(std::move(out_poly), std::move(rem), domain);
}

}  // namespace reachrisk
