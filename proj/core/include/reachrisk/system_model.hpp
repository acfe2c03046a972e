#pragma once

#include <Eigen/Dense>

#include "reachrisk/smooth_map.hpp"

namespace reachrisk {

/// Discrete-time plant x' = f(x, u) + E w with sensor y = h(x) + v and
/// feedback u = g(x_hat). `dynamics` takes the joint vector [x; u].
/// `noise_map` embeds the n_w-dimensional process noise into state space.
struct SystemModel {
  SmoothMap dynamics;   // (n_x + n_u) -> n_x
  SmoothMap sensor;     // n_x -> n_y
  SmoothMap controller; // n_x -> n_u
  Eigen::MatrixXd process_noise_cov;      // n_w x n_w
  Eigen::MatrixXd measurement_noise_cov;  // n_y x n_y
  Eigen::MatrixXd noise_map;              // n_x x n_w

  int n_x() const { return dynamics.codomain(); }
  int n_u() const { return controller.codomain(); }
  int n_y() const { return sensor.codomain(); }
  int n_w() const { return static_cast<int>(noise_map.cols()); }

  Eigen::VectorXd f(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    Eigen::VectorXd joint(x.size() + u.size());
    joint << x, u;
    return dynamics(joint);
  }
  Eigen::VectorXd h(const Eigen::VectorXd& x) const { return sensor(x); }
  Eigen::VectorXd g(const Eigen::VectorXd& x_hat) const { return controller(x_hat); }

  /// Process noise covariance lifted into state space, E P_w E^T.
  Eigen::MatrixXd state_noise_cov() const {
    return noise_map * process_noise_cov * noise_map.transpose();
  }
};

}  // namespace reachrisk
