#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "reachrisk/config.hpp"
#include "reachrisk/reach.hpp"
#include "reachrisk/risk.hpp"

namespace reachrisk {

/// Line-delimited records: first line a header object, one object per
/// segment after it. Numbers round-trip exactly.
void write_flowpipe_records(std::ostream& out, const Flowpipe& fp, double dt);
Flowpipe read_flowpipe_records(std::istream& in);

/// Per-step box hulls, one row per step: k, t, then lo/hi per axis.
void write_flowpipe_csv(std::ostream& out, const Flowpipe& fp);

struct ValidationReport {
  int horizon = 0;
  int trace_count = 0;
  std::vector<int> contained_per_step;  // traces inside segment k
  std::vector<bool> trace_contained;    // pointwise containment per trace
  double fraction = 0.0;                // fully contained traces / traces
};

void write_validation_records(std::ostream& out, const ValidationReport& report);
void write_validation_csv(std::ostream& out, const ValidationReport& report);

struct RiskSeries {
  std::vector<double> times;
  std::vector<RiskReport> attacked;
  std::vector<RiskReport> attack_free;
  double attack_free_threshold = 0.0;  // observed average normalized residual
};

void write_risk_series_records(std::ostream& out, const RiskSeries& series);
void write_risk_series_csv(std::ostream& out, const RiskSeries& series);

}  // namespace reachrisk
