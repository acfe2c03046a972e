#include "reachrisk/lin_feasibility.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "reachrisk/errors.hpp"

namespace reachrisk::detail {

namespace {
constexpr double kPivotTol = 1e-11;
}

bool box_constrained_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = A.cols();
  if (b.size() != n) throw std::invalid_argument("box_constrained_feasible: rhs size mismatch");
  if (n == 0) return true;

  // Shift x = y - 1 so structural variables live in [0, 2], which gives a
  // valid all-nonbasic-at-lower-bound start.
  const Eigen::VectorXd d = b + A.rowwise().sum();
  const double scale = 1.0 + d.cwiseAbs().maxCoeff();

  const Eigen::Index total = m + n;  // structural variables then artificials
  std::vector<double> art_sign(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) art_sign[static_cast<size_t>(i)] = d[i] >= 0.0 ? 1.0 : -1.0;

  auto column = [&](Eigen::Index j) -> Eigen::VectorXd {
    if (j < m) return A.col(j);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j - m] = art_sign[static_cast<size_t>(j - m)];
    return e;
  };
  auto upper_of = [&](Eigen::Index j) -> double {
    return j < m ? 2.0 : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::Index> basis(static_cast<size_t>(n));
  std::vector<bool> in_basis(static_cast<size_t>(total), false);
  std::vector<bool> at_upper(static_cast<size_t>(total), false);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    basis[static_cast<size_t>(i)] = m + i;
    in_basis[static_cast<size_t>(m + i)] = true;
    B.col(i) = column(m + i);
  }

  auto basic_values = [&]() -> Eigen::VectorXd {
    Eigen::VectorXd rhs = d;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!in_basis[static_cast<size_t>(j)] && at_upper[static_cast<size_t>(j)])
        rhs -= column(j) * 2.0;
    }
    return B.fullPivLu().solve(rhs);
  };

  const long max_iter = 200 * static_cast<long>(total) + 500;
  for (long iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd xb = basic_values();

    Eigen::VectorXd cb = Eigen::VectorXd::Zero(n);
    double obj = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (basis[static_cast<size_t>(i)] >= m) {
        cb[i] = 1.0;
        obj += xb[i];
      }
    }
    if (obj <= tol * scale) return true;

    const Eigen::VectorXd lambda = B.transpose().fullPivLu().solve(cb);

    // Entering variable, Bland's rule. Artificials never re-enter.
    Eigen::Index enter = -1;
    bool enter_up = true;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (in_basis[static_cast<size_t>(j)]) continue;
      const double rc = -lambda.dot(A.col(j));
      if (!at_upper[static_cast<size_t>(j)] && rc < -kPivotTol) {
        enter = j;
        enter_up = true;
        break;
      }
      if (at_upper[static_cast<size_t>(j)] && rc > kPivotTol) {
        enter = j;
        enter_up = false;
        break;
      }
    }
    if (enter < 0) return obj <= tol * scale;

    const Eigen::VectorXd w = B.fullPivLu().solve(column(enter));
    const double dir = enter_up ? 1.0 : -1.0;

    // Ratio test: basics move by -dir * w * t as the entering variable
    // travels t away from its bound.
    const double t_flip = 2.0;
    double t_min = std::numeric_limits<double>::infinity();
    Eigen::Index leave_pos = -1;
    bool leave_at_upper = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double wi = dir * w[i];
      const Eigen::Index bi = basis[static_cast<size_t>(i)];
      double t = std::numeric_limits<double>::infinity();
      bool hits_upper = false;
      if (wi > kPivotTol) {
        t = xb[i] / wi;  // lower bound of every variable is 0
      } else if (wi < -kPivotTol) {
        const double ub = upper_of(bi);
        if (std::isinf(ub)) continue;
        t = (ub - xb[i]) / (-wi);
        hits_upper = true;
      } else {
        continue;
      }
      if (t < 0.0) t = 0.0;
      if (t < t_min - 1e-12 ||
          (t <= t_min + 1e-12 && leave_pos >= 0 && bi < basis[static_cast<size_t>(leave_pos)])) {
        t_min = t;
        leave_pos = i;
        leave_at_upper = hits_upper;
      }
    }

    if (leave_pos < 0 || t_flip < t_min - 1e-12) {
      // Bound flip, basis unchanged.
      at_upper[static_cast<size_t>(enter)] = !at_upper[static_cast<size_t>(enter)];
      continue;
    }

    const Eigen::Index leaving = basis[static_cast<size_t>(leave_pos)];
    in_basis[static_cast<size_t>(leaving)] = false;
    at_upper[static_cast<size_t>(leaving)] = leave_at_upper;
    basis[static_cast<size_t>(leave_pos)] = enter;
    in_basis[static_cast<size_t>(enter)] = true;
    B.col(leave_pos) = column(enter);
  }

  throw NumericalError("box_constrained_feasible: simplex iteration cap exceeded");
}

}  // namespace reachrisk::detail
