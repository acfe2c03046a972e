#pragma once

#include "reachrisk/config.hpp"
#include "reachrisk/serialize.hpp"

namespace reachrisk {

/// Flowpipe over the configured horizon from the configured initial
/// filter state.
Flowpipe run_reach_experiment(const ExperimentConfig& cfg);

/// Rejection-sampled stealth traces checked pointwise against the
/// flowpipe. Traces run in parallel; results are deterministic for a
/// fixed (config, seed).
ValidationReport run_validation_experiment(const ExperimentConfig& cfg, const Flowpipe& flowpipe);

/// Nominal closed-loop run; at every timestep a lookahead flowpipe from
/// the current filter state, scored against the risk field, with and
/// without the stealth-attack residual budget.
RiskSeries run_risk_experiment(const ExperimentConfig& cfg);

/// Command wrappers: write artifacts into cfg.output_dir and return a
/// process exit code (0 ok, 2 config error, 3 divergence).
int cmd_reach(const ExperimentConfig& cfg);
int cmd_validate(const ExperimentConfig& cfg);
int cmd_risk(const ExperimentConfig& cfg);

/// Exit codes shared by the command wrappers and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDivergence = 3;

}  // namespace reachrisk
