#include "reachrisk/zonotope.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "reachrisk/lin_feasibility.hpp"

namespace reachrisk {

Zonotope::Zonotope(Eigen::VectorXd center, Eigen::MatrixXd generators)
    : center_(std::move(center)), generators_(std::move(generators)) {
  if (center_.size() == 0) throw std::invalid_argument("Zonotope: empty center");
  if (generators_.rows() != center_.size())
    throw std::invalid_argument("Zonotope: generator rows must match dimension");
  if (!center_.allFinite() || !generators_.allFinite())
    throw std::invalid_argument("Zonotope: non-finite entries");
}

Zonotope Zonotope::from_interval(const Interval& box) {
  const Eigen::VectorXd r = box.radii();
  std::vector<Eigen::Index> nonzero;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (r[i] > 0.0) nonzero.push_back(i);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(box.dim(), static_cast<Eigen::Index>(nonzero.size()));
  for (size_t j = 0; j < nonzero.size(); ++j) G(nonzero[j], static_cast<Eigen::Index>(j)) = r[nonzero[j]];
  return Zonotope(box.mid(), std::move(G));
}

double Zonotope::support(const Eigen::VectorXd& direction) const {
  if (direction.size() != dim()) throw std::invalid_argument("support: dimension mismatch");
  return direction.dot(center_) + (generators_.transpose() * direction).cwiseAbs().sum();
}

Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("minkowski_sum: dimension mismatch");
  Eigen::MatrixXd G(a.dim(), a.num_generators() + b.num_generators());
  G << a.generators(), b.generators();
  return Zonotope(a.center() + b.center(), std::move(G));
}

Zonotope linear_map(const Eigen::MatrixXd& L, const Eigen::VectorXd& b, const Zonotope& z) {
  if (L.cols() != z.dim()) throw std::invalid_argument("linear_map: L columns must match dimension");
  if (b.size() != L.rows()) throw std::invalid_argument("linear_map: offset size must match L rows");
  return Zonotope(L * z.center() + b, L * z.generators());
}

Zonotope reduce_order(const Zonotope& z, Eigen::Index target_generators) {
  const Eigen::Index n = z.dim();
  const Eigen::Index m = z.num_generators();
  if (target_generators < n)
    throw std::invalid_argument("reduce_order: target below dimension");
  if (m <= target_generators) return z;

  // Girard: keep the generators that least resemble an axis-aligned box,
  // measured by |g|_1 - |g|_inf, and box the remainder.
  const Eigen::MatrixXd& G = z.generators();
  std::vector<Eigen::Index> idx(static_cast<size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  Eigen::VectorXd metric(m);
  for (Eigen::Index j = 0; j < m; ++j)
    metric[j] = G.col(j).lpNorm<1>() - G.col(j).lpNorm<Eigen::Infinity>();
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return metric[a] > metric[b]; });

  const Eigen::Index keep = target_generators - n;
  Eigen::MatrixXd kept(n, keep);
  for (Eigen::Index j = 0; j < keep; ++j) kept.col(j) = G.col(idx[static_cast<size_t>(j)]);

  Eigen::VectorXd box = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = keep; j < m; ++j) box += G.col(idx[static_cast<size_t>(j)]).cwiseAbs();

  std::vector<Eigen::Index> nonzero;
  for (Eigen::Index i = 0; i < n; ++i)
    if (box[i] > 0.0) nonzero.push_back(i);

  Eigen::MatrixXd out(n, keep + static_cast<Eigen::Index>(nonzero.size()));
  out.leftCols(keep) = kept;
  out.rightCols(static_cast<Eigen::Index>(nonzero.size())).setZero();
  for (size_t j = 0; j < nonzero.size(); ++j)
    out(nonzero[j], keep + static_cast<Eigen::Index>(j)) = box[nonzero[j]];
  return Zonotope(z.center(), std::move(out));
}

Interval to_interval(const Zonotope& z) {
  Eigen::VectorXd r = z.generators().cwiseAbs().rowwise().sum();
  return Interval(z.center() - r, z.center() + r);
}

bool intersects(const Zonotope& a, const Zonotope& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("intersects: dimension mismatch");
  // Cheap exact reject: disjoint bounding boxes cannot intersect.
  const Interval ba = to_interval(a);
  const Interval bb = to_interval(b);
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    if (ba.lower()[i] > bb.upper()[i] || bb.lower()[i] > ba.upper()[i]) return false;
  }
  Eigen::MatrixXd A(a.dim(), a.num_generators() + b.num_generators());
  A << a.generators(), -b.generators();
  return detail::box_constrained_feasible(A, b.center() - a.center());
}

bool contains_point(const Zonotope& z, const Eigen::VectorXd& p) {
  if (p.size() != z.dim()) throw std::invalid_argument("contains_point: dimension mismatch");
  if (!to_interval(z).contains(p, 1e-9)) return false;
  return detail::box_constrained_feasible(z.generators(), p - z.center());
}

}  // namespace reachrisk
