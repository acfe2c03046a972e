#pragma once

#include <Eigen/Dense>

#include "reachrisk/interval.hpp"

namespace reachrisk {

/// Centrally symmetric set {c + G x | x in [-1,1]^m}. Columns of the
/// generator matrix are the line-segment generators; m = 0 is a point.
class Zonotope {
public:
  Zonotope() = default;
  Zonotope(Eigen::VectorXd center, Eigen::MatrixXd generators);

  static Zonotope point(const Eigen::VectorXd& c) {
    return Zonotope(c, Eigen::MatrixXd::Zero(c.size(), 0));
  }
  static Zonotope from_interval(const Interval& box);

  Eigen::Index dim() const { return center_.size(); }
  Eigen::Index num_generators() const { return generators_.cols(); }
  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::MatrixXd& generators() const { return generators_; }

  /// Support value max{d.x | x in Z}.
  double support(const Eigen::VectorXd& direction) const;

private:
  Eigen::VectorXd center_;
  Eigen::MatrixXd generators_;
};

/// <c1+c2, [G1 G2]>; requires equal dimension.
Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b);

/// Affine image <L c + b, L G>.
Zonotope linear_map(const Eigen::MatrixXd& L, const Eigen::VectorXd& b, const Zonotope& z);

/// Girard box reduction: keep the target-n generators that are furthest
/// from axis-aligned (by |g|_1 - |g|_inf) and enclose the rest in an
/// axis-aligned box. The result contains z and has at most
/// `target_generators` generators; requires target_generators >= dim.
Zonotope reduce_order(const Zonotope& z, Eigen::Index target_generators);

/// Tight axis-aligned bounding box, c_i +/- sum_j |G_ij|.
Interval to_interval(const Zonotope& z);

/// Exact intersection decision via linear feasibility of
/// c_a + G_a alpha = c_b + G_b beta with alpha, beta in [-1,1].
/// Touching boundaries count as intersecting.
bool intersects(const Zonotope& a, const Zonotope& b);

/// Exact membership decision (feasibility of G alpha = p - c).
bool contains_point(const Zonotope& z, const Eigen::VectorXd& p);

}  // namespace reachrisk
