#pragma once

#include <Eigen/Dense>

#include "reachrisk/ellipsoid.hpp"
#include "reachrisk/smooth_map.hpp"

namespace reachrisk {

/// Unscented-transform weights with the standard parameterization
/// (a = 1, b = 2, kappa = 0), so lambda = 0 and the center point carries
/// no mean weight.
struct UTWeights {
  double lambda = 0.0;
  Eigen::VectorXd mean_weights;
  Eigen::VectorXd cov_weights;

  static UTWeights standard(int state_dim);
};

/// Filter iterates after one measurement update.
struct FilterState {
  Eigen::VectorXd mean;      // x_hat
  Eigen::MatrixXd cov;       // P_x
  Eigen::MatrixXd gain;      // K
  Eigen::VectorXd pred_mean; // x_hat^-
  Eigen::MatrixXd pred_cov;  // P_x^-
  Eigen::MatrixXd innov_cov; // P_y
  Eigen::MatrixXd cross_cov; // P_xy
};

/// Chi-square residual detector: alarm when r^T P_y^-1 r > threshold.
struct DetectorConfig {
  double confidence = 0.95;
  double threshold = 0.0;
  int sensor_dim = 0;

  static DetectorConfig from_confidence(int sensor_dim, double confidence);
};

struct UTResult {
  Eigen::VectorXd pred_mean;
  Eigen::MatrixXd pred_cov;
  Eigen::MatrixXd innov_cov;
  Eigen::MatrixXd cross_cov;
  Eigen::VectorXd pred_output;
};

struct UkfStepResult {
  FilterState state;
  Eigen::VectorXd residual;
  double nis = 0.0;
  bool alarm = false;
};

/// Chi-square quantile (inverse CDF).
double chi2_quantile(int dof, double prob);

/// Square root of a positive semidefinite matrix. Cholesky when possible,
/// eigendecomposition with a small negative clamp otherwise; genuinely
/// indefinite matrices raise NumericalError.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& P);

/// Rank-aware inverse of a positive semidefinite matrix: eigenvalues
/// below max(zero_scale, 1e-12 * lambda_max) are treated as exactly zero.
/// A matrix that is zero at the given scale inverts to zero, which is the
/// noise-free filter limit (no correction, nothing to normalize).
Eigen::MatrixXd psd_pseudo_inverse(const Eigen::MatrixXd& M, double zero_scale);

/// Sigma points of (mean, cov): the mean plus +/- sqrt(n + lambda) times
/// each column of the covariance square root. 2n+1 columns.
Eigen::MatrixXd sigma_points(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                             double lambda);

/// One unscented transform through the joint dynamics f([x; u]) and the
/// sensor map h(x). The output prediction and its covariances are built
/// from the same pre-update sigma points, matching a sensor that reports
/// the previous state.
UTResult unscented_transform(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                             const SmoothMap& f, const Eigen::VectorXd& u,
                             const Eigen::MatrixXd& P_w_state, const SmoothMap& h,
                             const Eigen::MatrixXd& P_v, const UTWeights& weights);

/// Full filter step: predict with input u, correct with measurement y,
/// evaluate the detector on the residual y - h(x_hat_prev).
UkfStepResult ukf_step(const FilterState& prev, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& y, const SmoothMap& f, const SmoothMap& h,
                       const Eigen::MatrixXd& P_w_state, const Eigen::MatrixXd& P_v,
                       const UTWeights& weights, const DetectorConfig& detector);

/// Residual tolerance region {r | r^T P_y^-1 r <= threshold} as an
/// ellipsoid centered at the origin.
Ellipsoid tolerance_region(const Eigen::MatrixXd& innov_cov, const DetectorConfig& detector);

}  // namespace reachrisk
