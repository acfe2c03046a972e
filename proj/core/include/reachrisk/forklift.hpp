#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reachrisk/system_model.hpp"
#include "reachrisk/ukf.hpp"

namespace reachrisk {

/// Two-wheeled warehouse vehicle guided by a Stanley controller along a
/// straight lane. State is [x, y, heading]; the single input is the front
/// wheel angle.
struct ForkliftParams {
  double length = 2.0;       // wheelbase, m
  double speed = 5.0;        // constant forward speed, m/s
  double dt = 0.1;           // step, s
  double gain = 0.1;         // Stanley cross-track gain
  double softening = 0.05;   // Stanley softening constant
  double lane_offset = 0.0;  // target lane y coordinate
  double heading_ref = 0.0;  // target lane heading
  Eigen::Matrix2d process_noise_cov = 0.2 * Eigen::Matrix2d::Identity();
  Eigen::Matrix2d measurement_noise_cov = 0.2 * Eigen::Matrix2d::Identity();
};

/// One plant step: positions advance by dt*v along heading+steer, the
/// heading by (dt*v/L) sin(steer); noise enters the positions only.
Eigen::Vector3d forklift_dynamics(const Eigen::Vector3d& x, double steer,
                                  const Eigen::Vector2d& w, const ForkliftParams& p);

/// Sensor reads [y position, heading] plus noise.
Eigen::Vector2d forklift_sensor(const Eigen::Vector3d& x, const Eigen::Vector2d& v);

/// Stanley law on path-relative errors: steer = heading_error +
/// atan(gain * cross_track_error / (softening + speed)).
double stanley_control(double cross_track_error, double heading_error, const ForkliftParams& p);

/// Full closed-loop model. The controller feeds the Stanley law the
/// path-relative errors (lane_offset - y, heading_ref - heading).
SystemModel make_forklift_model(const ForkliftParams& p);

/// Per-step sensor injections together with the trajectory they produced.
/// Stealthy by construction: no step may raise the detector alarm.
struct AttackTrace {
  Eigen::MatrixXd attacks;  // horizon x n_y, row k-1 applied at step k
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> estimates;
  std::vector<double> nis;
  std::vector<bool> alarms;
  long redraws = 0;
};

struct SimulationResult {
  std::vector<Eigen::VectorXd> states;     // x_0 .. x_n
  std::vector<Eigen::VectorXd> estimates;  // x_hat_0 .. x_hat_n
  std::vector<Eigen::MatrixXd> covariances;
  std::vector<Eigen::VectorXd> inputs;     // u_k applied over [t_k, t_k+1]
  std::vector<double> nis;                 // per update step 1..n
  std::vector<bool> alarms;
};

/// Plant + UKF + controller loop; reproducible for a fixed seed. If an
/// attack matrix is given, row k-1 is added to the measurement at step k.
SimulationResult simulate_closed_loop(const SystemModel& model, const Eigen::VectorXd& x0_hat,
                                      const Eigen::MatrixXd& P0, int steps, std::uint64_t seed,
                                      const DetectorConfig& detector,
                                      const std::optional<Eigen::MatrixXd>& attacks = std::nullopt);

/// Rejection-samples per-step attack vectors from the uniform box
/// [-1,1]^n_y, redrawing any vector that would raise the alarm (up to
/// 1000 redraws per step, then zero). Trace i uses seed + i.
std::vector<AttackTrace> sample_stealth_attacks(const SystemModel& model,
                                                const Eigen::VectorXd& x0_hat,
                                                const Eigen::MatrixXd& P0, int count, int horizon,
                                                std::uint64_t seed, const DetectorConfig& detector);

}  // namespace reachrisk
