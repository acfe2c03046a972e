#pragma once

#include <Eigen/Dense>
#include <utility>

#include "reachrisk/zonotope.hpp"

namespace reachrisk {

/// {x | (x - c)^T Q (x - c) <= 1} with Q symmetric positive definite.
class Ellipsoid {
public:
  Ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape);

  Eigen::Index dim() const { return center_.size(); }
  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::MatrixXd& shape() const { return shape_; }

  bool contains(const Eigen::VectorXd& p, double tol = 1e-12) const;

private:
  Eigen::VectorXd center_;
  Eigen::MatrixXd shape_;
};

/// Two enclosing boxes: H1 is aligned with the principal axes (columns are
/// eigenvectors scaled by eigenvalue^{-1/2}); H2 is the tight axis-aligned
/// box with half-widths sqrt(diag(Q^-1)).
std::pair<Zonotope, Zonotope> ellipsoid_bounding_boxes(const Ellipsoid& e);

/// Enclosing zonotope with both generator families, half of each:
/// <c, [G1/2, G2/2]> where G1 spans H1 and G2 spans H2. Sound for any
/// convex combination of the two boxes; exact for axis-aligned shapes.
Zonotope ellipsoid_to_zonotope(const Ellipsoid& e);

}  // namespace reachrisk
