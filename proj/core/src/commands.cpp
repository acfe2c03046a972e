#include "reachrisk/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <thread>

#include "reachrisk/errors.hpp"

namespace reachrisk {

namespace {

bool log_enabled() {
  const char* v = std::getenv("REACHRISK_LOG");
  return v != nullptr && std::string(v) != "" && std::string(v) != "quiet";
}

void log_line(const std::string& msg) {
  if (log_enabled()) std::clog << "[reachrisk] " << msg << "\n";
}

/// Index-parallel loop with deterministic output: every worker writes
/// only results[i]. Exceptions are rethrown on the caller thread.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::ofstream open_output(const ExperimentConfig& cfg, const std::string& stem) {
  std::filesystem::create_directories(cfg.output_dir);
  const std::string ext = cfg.format == OutputFormat::records ? ".records" : ".csv";
  const std::string path = (std::filesystem::path(cfg.output_dir) / (stem + ext)).string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  log_line("writing " + path);
  return out;
}

int steps_of(double seconds, double dt) {
  return std::max(1, static_cast<int>(std::llround(seconds / dt)));
}

template <typename Fn>
int guard_exit(Fn&& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << " (last valid step " << e.last_valid_step << ")\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

Flowpipe run_reach_experiment(const ExperimentConfig& cfg) {
  const SystemModel model = make_model(cfg);
  return compute_flowpipe(cfg.x0_hat, cfg.P0, model, cfg.reach);
}

ValidationReport run_validation_experiment(const ExperimentConfig& cfg, const Flowpipe& flowpipe) {
  const SystemModel model = make_model(cfg);
  const DetectorConfig detector = make_detector(cfg);
  const int horizon = cfg.reach.horizon;

  const std::vector<AttackTrace> traces = sample_stealth_attacks(
      model, cfg.x0_hat, cfg.P0, cfg.trace_count, horizon, cfg.seed, detector);

  ValidationReport report;
  report.horizon = horizon;
  report.trace_count = cfg.trace_count;
  report.contained_per_step.assign(static_cast<size_t>(horizon), 0);
  report.trace_contained.assign(traces.size(), false);

  std::vector<std::vector<bool>> step_hits(traces.size(),
                                           std::vector<bool>(static_cast<size_t>(horizon), false));
  parallel_for(static_cast<int>(traces.size()), [&](int i) {
    const auto& trace = traces[static_cast<size_t>(i)];
    bool all = true;
    for (int k = 1; k <= horizon; ++k) {
      const bool inside = contains_point(flowpipe.segments[static_cast<size_t>(k - 1)].set,
                                         trace.states[static_cast<size_t>(k)]);
      step_hits[static_cast<size_t>(i)][static_cast<size_t>(k - 1)] = inside;
      all = all && inside;
    }
    report.trace_contained[static_cast<size_t>(i)] = all;
  });

  int fully = 0;
  for (size_t i = 0; i < traces.size(); ++i) {
    if (report.trace_contained[i]) ++fully;
    for (int k = 0; k < horizon; ++k)
      if (step_hits[i][static_cast<size_t>(k)]) ++report.contained_per_step[static_cast<size_t>(k)];
  }
  report.fraction = static_cast<double>(fully) / static_cast<double>(traces.size());
  return report;
}

RiskSeries run_risk_experiment(const ExperimentConfig& cfg) {
  const SystemModel model = make_model(cfg);
  const DetectorConfig detector = make_detector(cfg);
  const RiskField field = make_risk_field(cfg);
  const int steps = steps_of(cfg.duration_seconds, cfg.forklift.dt);
  const int window = steps_of(cfg.lookahead_seconds, cfg.forklift.dt);

  const SimulationResult nominal = simulate_closed_loop(model, cfg.x0_hat, cfg.P0, steps,
                                                        cfg.seed, detector);
  const double avg_nis = nominal.nis.empty()
                             ? 0.0
                             : std::accumulate(nominal.nis.begin(), nominal.nis.end(), 0.0) /
                                   static_cast<double>(nominal.nis.size());

  ReachConfig attacked_cfg = cfg.reach;
  attacked_cfg.horizon = window;
  ReachConfig free_cfg = attacked_cfg;
  free_cfg.detector_threshold_override = avg_nis;

  RiskSeries series;
  series.attack_free_threshold = avg_nis;
  series.times.resize(static_cast<size_t>(steps) + 1);
  series.attacked.resize(static_cast<size_t>(steps) + 1);
  series.attack_free.resize(static_cast<size_t>(steps) + 1);

  const double beta = cfg.reach.noise_confidence;
  parallel_for(steps + 1, [&](int k) {
    const auto& x_hat = nominal.estimates[static_cast<size_t>(k)];
    const auto& p_hat = nominal.covariances[static_cast<size_t>(k)];
    series.times[static_cast<size_t>(k)] = k * cfg.forklift.dt;
    const Flowpipe fp_attacked = compute_flowpipe(x_hat, p_hat, model, attacked_cfg);
    const Flowpipe fp_free = compute_flowpipe(x_hat, p_hat, model, free_cfg);
    series.attacked[static_cast<size_t>(k)] = rr_metric(fp_attacked, field, beta);
    series.attack_free[static_cast<size_t>(k)] = rr_metric(fp_free, field, beta);
  });
  return series;
}

int cmd_reach(const ExperimentConfig& cfg) {
  return guard_exit([&] {
    const Flowpipe fp = run_reach_experiment(cfg);
    auto out = open_output(cfg, "flowpipe");
    if (cfg.format == OutputFormat::records)
      write_flowpipe_records(out, fp, cfg.reach.dt);
    else
      write_flowpipe_csv(out, fp);
    std::cout << "flowpipe: " << fp.segments.size() << " segments over "
              << cfg.reach.horizon * cfg.reach.dt << " s\n";
  });
}

int cmd_validate(const ExperimentConfig& cfg) {
  return guard_exit([&] {
    const Flowpipe fp = run_reach_experiment(cfg);
    const ValidationReport report = run_validation_experiment(cfg, fp);
    auto out = open_output(cfg, "validation");
    if (cfg.format == OutputFormat::records)
      write_validation_records(out, report);
    else
      write_validation_csv(out, report);
    std::cout << "containment: " << report.fraction << " of " << report.trace_count
              << " stealth traces inside the flowpipe\n";
  });
}

int cmd_risk(const ExperimentConfig& cfg) {
  return guard_exit([&] {
    const RiskSeries series = run_risk_experiment(cfg);
    auto out = open_output(cfg, "risk_series");
    if (cfg.format == OutputFormat::records)
      write_risk_series_records(out, series);
    else
      write_risk_series_csv(out, series);
    double peak = 0.0;
    for (const auto& r : series.attacked) peak = std::max(peak, r.total);
    std::cout << "risk series: " << series.times.size() << " points, peak attacked risk " << peak
              << "\n";
  });
}

}  // namespace reachrisk
