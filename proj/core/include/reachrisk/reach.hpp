#pragma once

#include <optional>
#include <vector>

#include "reachrisk/system_model.hpp"
#include "reachrisk/taylor_model.hpp"
#include "reachrisk/ukf.hpp"

namespace reachrisk {

struct ReachConfig {
  int taylor_order = 2;
  int horizon = 10;
  double noise_confidence = 0.95;     // quantile bounding the process noise
  double detector_confidence = 0.95;  // quantile behind the residual threshold
  Eigen::Index generator_budget = 6;  // generators kept per flowpipe segment
  double dt = 0.1;
  double divergence_cap = 1e3;  // abort when any half-width passes this
  // Residual bound override, e.g. an observed average normalized residual
  // for an attack-free analysis. Zero collapses the residual set to a point.
  std::optional<double> detector_threshold_override;

  double detector_threshold(int sensor_dim) const;
  double noise_threshold(int noise_dim) const;
};

/// Sets the iteration carries between steps. `input_set` holds the
/// control-input set applied over [t_k, t_{k+1}], derived from the
/// previous step's estimate set; `filter` holds the center-evaluated UKF
/// matrices of the current step.
struct ReachState {
  TaylorModel true_set;
  TaylorModel est_set;
  TaylorModel input_set;
  Zonotope true_segment;  // budget-reduced zonotope of true_set
  FilterState filter;
  int step = 0;
};

struct Flowpipe {
  struct Segment {
    int k = 0;
    double t = 0.0;
    Zonotope set;
  };
  std::vector<Segment> segments;
};

/// First step: one unscented transform from (x0_hat, P0), the estimate
/// set seeded with the gain-mapped residual region, the true set with the
/// one-step image of x0 plus the bounded process noise.
ReachState initialize(const Eigen::VectorXd& x0_hat, const Eigen::MatrixXd& P0,
                      const SystemModel& model, const ReachConfig& cfg);

/// Advances the estimate set and filter matrices: the prediction is the
/// sigma-point-weighted image of the current estimate set under the
/// dynamics, and the new estimate set adds the gain-mapped residual
/// region. Reads the step-k state; true/input sets pass through.
ReachState ukf_update_step(const ReachState& state, const SystemModel& model,
                           const ReachConfig& cfg);

/// Advances the true-state and input sets: the next input set is the
/// controller image of the current estimate set, the next true set the
/// dynamics image of (true set x input set) plus bounded noise. Reads the
/// step-k state; estimate set and filter pass through.
ReachState system_update_step(const ReachState& state, const SystemModel& model,
                              const ReachConfig& cfg);

/// Runs the full iteration for cfg.horizon steps and collects one
/// zonotope per step. Throws DivergenceError when the width cap trips.
Flowpipe compute_flowpipe(const Eigen::VectorXd& x0_hat, const Eigen::MatrixXd& P0,
                          const SystemModel& model, const ReachConfig& cfg);

/// Bounded process-noise region in state space (an enclosing zonotope of
/// the covariance ellipsoid at the configured confidence).
Zonotope noise_region_zonotope(const SystemModel& model, const ReachConfig& cfg);

}  // namespace reachrisk
