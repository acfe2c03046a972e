#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reachrisk/forklift.hpp"
#include "reachrisk/reach.hpp"
#include "reachrisk/risk.hpp"

namespace reachrisk {

enum class OutputFormat { records, csv };

/// One experiment: the plant, the estimator priors, the reachability
/// settings, the scenario's risk field, and the simulation/output knobs.
/// All dimensions are validated before any computation runs.
struct ExperimentConfig {
  // system
  ForkliftParams forklift;

  // estimator
  Eigen::VectorXd x0_hat;
  Eigen::MatrixXd P0;

  // reach (dt mirrors the system step; detector_confidence lives here too)
  ReachConfig reach;

  // risk
  std::vector<RiskSet> risk_sets;
  double dilution_factor = 1.05;
  int dilution_levels = 20;
  Eigen::MatrixXd correlation;
  double lookahead_seconds = 1.5;

  // simulation
  int trace_count = 500;
  std::uint64_t seed = 1;
  double duration_seconds = 10.0;

  // output
  std::string output_dir = "out";
  OutputFormat format = OutputFormat::records;
};

/// Parses and validates a JSON experiment description. Throws ConfigError
/// with the offending field path on any violation.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

SystemModel make_model(const ExperimentConfig& cfg);
DetectorConfig make_detector(const ExperimentConfig& cfg);
RiskField make_risk_field(const ExperimentConfig& cfg);

}  // namespace reachrisk
