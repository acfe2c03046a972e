#pragma once

#include <string>
#include <vector>

#include "reachrisk/reach.hpp"
#include "reachrisk/zonotope.hpp"

namespace reachrisk {

/// Critical region of one scenario event, carried in a designated state
/// subspace, together with its expected loss.
struct RiskSet {
  Zonotope region;
  double risk = 0.0;  // gamma * expected loss, non-negative
  std::string event_id;
  std::vector<Eigen::Index> subspace;  // state indices the region lives in
};

/// Per-event sequences of progressively diluted risk sets plus the event
/// correlation matrix.
struct RiskField {
  std::vector<std::vector<RiskSet>> sequences;  // [event][dilution level]
  double dilution_factor = 1.05;
  Eigen::MatrixXd correlation;
};

struct RiskReport {
  Eigen::VectorXd zeta;            // per-event risk value
  double total = 0.0;              // beta * zeta C zeta^T
  std::vector<int> matched_level;  // smallest intersecting dilution, -1 if none
};

/// Scales the region about its own center by factor^j and divides the
/// risk by factor^(j * n_s), n_s the region dimension.
RiskSet dilute(const RiskSet& rs, double factor, int level);

/// Levels 0..levels for every event; `correlation` must be symmetric with
/// unit diagonal and entries in [-1, 1].
RiskField build_field(const std::vector<RiskSet>& risk_sets, double factor, int levels,
                      const Eigen::MatrixXd& correlation);

/// For each event, the largest diluted risk whose region meets any
/// flowpipe segment (projected onto the event's subspace); the total is
/// beta * zeta C zeta^T.
RiskReport rr_metric(const Flowpipe& flowpipe, const RiskField& field, double beta);

/// rr_metric applied per timestep.
std::vector<std::pair<double, RiskReport>> risk_time_series(
    const std::vector<std::pair<double, Flowpipe>>& flowpipes, const RiskField& field,
    double beta);

}  // namespace reachrisk
