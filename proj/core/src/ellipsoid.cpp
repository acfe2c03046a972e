#include "reachrisk/ellipsoid.hpp"

#include <Eigen/Eigenvalues>

#include "reachrisk/errors.hpp"

namespace reachrisk {

Ellipsoid::Ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape)
    : center_(std::move(center)), shape_(std::move(shape)) {
  if (shape_.rows() != center_.size() || shape_.cols() != center_.size())
    throw std::invalid_argument("Ellipsoid: shape matrix size mismatch");
  const double asym = (shape_ - shape_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) throw std::invalid_argument("Ellipsoid: shape matrix not symmetric");
  shape_ = 0.5 * (shape_ + shape_.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shape_);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("Ellipsoid: shape matrix not positive definite");
}

bool Ellipsoid::contains(const Eigen::VectorXd& p, double tol) const {
  const Eigen::VectorXd d = p - center_;
  return d.dot(shape_ * d) <= 1.0 + tol;
}

std::pair<Zonotope, Zonotope> ellipsoid_bounding_boxes(const Ellipsoid& e) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e.shape());
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("ellipsoid_bounding_boxes: shape matrix not positive definite");

  // Principal-axis box: generator i is eigenvector i with half-axis
  // eigenvalue^{-1/2}.
  const Eigen::MatrixXd G1 =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
  Zonotope h1(e.center(), G1);

  // Axis-aligned box: support of the ellipsoid along e_i is sqrt((Q^-1)_ii).
  const Eigen::MatrixXd qinv = es.operatorInverseSqrt() * es.operatorInverseSqrt();
  Zonotope h2(e.center(), qinv.diagonal().cwiseSqrt().asDiagonal());
  return {std::move(h1), std::move(h2)};
}

Zonotope ellipsoid_to_zonotope(const Ellipsoid& e) {
  auto [h1, h2] = ellipsoid_bounding_boxes(e);
  Eigen::MatrixXd G(e.dim(), h1.num_generators() + h2.num_generators());
  G << 0.5 * h1.generators(), 0.5 * h2.generators();
  return Zonotope(e.center(), std::move(G));
}

}  // namespace reachrisk
