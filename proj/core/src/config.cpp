#include "reachrisk/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reachrisk/errors.hpp"

namespace reachrisk {

namespace {

using nlohmann::json;

const json& field(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(path + "." + key, "missing field");
  return j.at(key);
}

double number(const json& j, const std::string& path, const std::string& key) {
  const json& v = field(j, path, key);
  if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& path, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  return number(j, path, key);
}

Eigen::VectorXd vector_of(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where, "expected an array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(where, "expected an array of numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

Eigen::MatrixXd matrix_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where, "expected a matrix (array of rows)");
  const size_t cols = v[0].is_array() ? v[0].size() : 0;
  if (cols == 0) throw ConfigError(where, "expected a matrix (array of rows)");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < v.size(); ++r) {
    if (!v[r].is_array() || v[r].size() != cols) throw ConfigError(where, "ragged matrix rows");
    for (size_t c = 0; c < cols; ++c) {
      if (!v[r][c].is_number()) throw ConfigError(where, "expected numeric entries");
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r][c].get<double>();
    }
  }
  return out;
}

void validate(const ExperimentConfig& cfg) {
  const auto& p = cfg.forklift;
  if (p.length <= 0 || p.speed <= 0 || p.dt <= 0)
    throw ConfigError("system.params", "length, speed and dt must be positive");
  if (cfg.x0_hat.size() != 3) throw ConfigError("estimator.initial_mean", "forklift state is 3-dimensional");
  if (cfg.P0.rows() != 3 || cfg.P0.cols() != 3)
    throw ConfigError("estimator.initial_cov", "expected a 3x3 matrix");
  if ((cfg.P0 - cfg.P0.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw ConfigError("estimator.initial_cov", "covariance must be symmetric");
  if (cfg.reach.taylor_order < 1 || cfg.reach.taylor_order > 2)
    throw ConfigError("reach.taylor_order", "forklift derivatives support orders 1 and 2");
  if (cfg.reach.horizon < 1) throw ConfigError("reach.horizon", "horizon must be >= 1");
  if (cfg.reach.noise_confidence <= 0.0 || cfg.reach.noise_confidence >= 1.0)
    throw ConfigError("reach.noise_confidence", "must lie in (0, 1)");
  if (cfg.reach.detector_confidence <= 0.0 || cfg.reach.detector_confidence >= 1.0)
    throw ConfigError("estimator.detector_confidence", "must lie in (0, 1)");
  if (cfg.reach.generator_budget < 3)
    throw ConfigError("reach.generator_budget", "budget below the state dimension");
  if (cfg.dilution_factor <= 1.0)
    throw ConfigError("risk.dilution_factor", "dilution factor must exceed 1");
  if (cfg.dilution_levels < 0) throw ConfigError("risk.levels", "levels must be >= 0");

  const Eigen::Index m = static_cast<Eigen::Index>(cfg.risk_sets.size());
  if (cfg.correlation.rows() != m || cfg.correlation.cols() != m)
    throw ConfigError("risk.correlation", "size must match the event count");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(cfg.correlation(i, i) - 1.0) > 1e-12)
      throw ConfigError("risk.correlation", "diagonal entries must be 1");
    for (Eigen::Index j2 = 0; j2 < m; ++j2) {
      if (std::abs(cfg.correlation(i, j2) - cfg.correlation(j2, i)) > 1e-12)
        throw ConfigError("risk.correlation", "matrix must be symmetric");
      if (cfg.correlation(i, j2) < -1.0 - 1e-12 || cfg.correlation(i, j2) > 1.0 + 1e-12)
        throw ConfigError("risk.correlation", "entries must lie in [-1, 1]");
    }
  }
  for (size_t i = 0; i < cfg.risk_sets.size(); ++i) {
    const auto& rs = cfg.risk_sets[i];
    const std::string where = "risk.events[" + std::to_string(i) + "]";
    if (rs.risk < 0) throw ConfigError(where + ".risk", "risk must be non-negative");
    if (rs.region.dim() != static_cast<Eigen::Index>(rs.subspace.size()))
      throw ConfigError(where + ".subspace", "length must match the region dimension");
    for (Eigen::Index s : rs.subspace)
      if (s < 0 || s >= 3) throw ConfigError(where + ".subspace", "state index out of range");
  }
  if (cfg.trace_count < 1) throw ConfigError("simulation.trace_count", "must be >= 1");
  if (cfg.duration_seconds <= 0) throw ConfigError("simulation.duration", "must be positive");
  if (cfg.lookahead_seconds <= 0) throw ConfigError("risk.lookahead", "must be positive");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }

  ExperimentConfig cfg;

  const json& system = field(j, "", "system");
  const std::string model_name = field(system, "system", "model").get<std::string>();
  if (model_name != "forklift")
    throw ConfigError("system.model", "unknown model '" + model_name + "' (expected \"forklift\")");
  const json& params = field(system, "system", "params");
  cfg.forklift.length = number_or(params, "system.params", "length", cfg.forklift.length);
  cfg.forklift.speed = number_or(params, "system.params", "speed", cfg.forklift.speed);
  cfg.forklift.dt = number_or(params, "system.params", "dt", cfg.forklift.dt);
  cfg.forklift.gain = number_or(params, "system.params", "gain", cfg.forklift.gain);
  cfg.forklift.softening = number_or(params, "system.params", "softening", cfg.forklift.softening);
  cfg.forklift.lane_offset = number_or(params, "system.params", "lane_offset", cfg.forklift.lane_offset);
  cfg.forklift.heading_ref = number_or(params, "system.params", "heading_ref", cfg.forklift.heading_ref);
  if (params.contains("process_noise_cov"))
    cfg.forklift.process_noise_cov =
        matrix_of(params.at("process_noise_cov"), "system.params.process_noise_cov");
  if (params.contains("measurement_noise_cov"))
    cfg.forklift.measurement_noise_cov =
        matrix_of(params.at("measurement_noise_cov"), "system.params.measurement_noise_cov");

  const json& est = field(j, "", "estimator");
  cfg.x0_hat = vector_of(field(est, "estimator", "initial_mean"), "estimator.initial_mean");
  cfg.P0 = matrix_of(field(est, "estimator", "initial_cov"), "estimator.initial_cov");
  cfg.reach.detector_confidence = number_or(est, "estimator", "detector_confidence", 0.95);

  const json& reach = field(j, "", "reach");
  cfg.reach.taylor_order = static_cast<int>(number_or(reach, "reach", "taylor_order", 2));
  cfg.reach.horizon = static_cast<int>(number(reach, "reach", "horizon"));
  cfg.reach.noise_confidence = number_or(reach, "reach", "noise_confidence", 0.95);
  cfg.reach.generator_budget =
      static_cast<Eigen::Index>(number_or(reach, "reach", "generator_budget", 6));
  cfg.reach.divergence_cap = number_or(reach, "reach", "divergence_cap", 1e3);
  cfg.reach.dt = cfg.forklift.dt;

  const json& risk = field(j, "", "risk");
  const json& events = field(risk, "risk", "events");
  if (!events.is_array()) throw ConfigError("risk.events", "expected an array");
  for (size_t i = 0; i < events.size(); ++i) {
    const std::string where = "risk.events[" + std::to_string(i) + "]";
    const json& ev = events[i];
    RiskSet rs;
    rs.event_id = field(ev, where, "id").get<std::string>();
    rs.risk = number(ev, where, "risk");
    for (const auto& s : field(ev, where, "subspace"))
      rs.subspace.push_back(static_cast<Eigen::Index>(s.get<int>()));
    if (ev.contains("region_box")) {
      const json& box = ev.at("region_box");
      const Eigen::VectorXd lo = vector_of(field(box, where + ".region_box", "lower"), where);
      const Eigen::VectorXd hi = vector_of(field(box, where + ".region_box", "upper"), where);
      if (lo.size() != hi.size() || (hi - lo).minCoeff() < 0)
        throw ConfigError(where + ".region_box", "lower must be <= upper");
      rs.region = Zonotope::from_interval(Interval(lo, hi));
    } else if (ev.contains("region")) {
      const json& reg = ev.at("region");
      rs.region = Zonotope(vector_of(field(reg, where + ".region", "center"), where),
                           matrix_of(field(reg, where + ".region", "generators"), where));
    } else {
      throw ConfigError(where, "expected region_box or region");
    }
    cfg.risk_sets.push_back(std::move(rs));
  }
  cfg.dilution_factor = number_or(risk, "risk", "dilution_factor", 1.05);
  cfg.dilution_levels = static_cast<int>(number_or(risk, "risk", "levels", 20));
  cfg.correlation = matrix_of(field(risk, "risk", "correlation"), "risk.correlation");
  cfg.lookahead_seconds = number_or(risk, "risk", "lookahead", 1.5);

  const json& sim = field(j, "", "simulation");
  cfg.trace_count = static_cast<int>(number_or(sim, "simulation", "trace_count", 500));
  cfg.seed = static_cast<std::uint64_t>(number_or(sim, "simulation", "seed", 1));
  cfg.duration_seconds = number_or(sim, "simulation", "duration", 10.0);

  if (j.contains("output")) {
    const json& out = j.at("output");
    if (out.contains("directory")) cfg.output_dir = out.at("directory").get<std::string>();
    if (out.contains("format")) {
      const std::string f = out.at("format").get<std::string>();
      if (f == "records")
        cfg.format = OutputFormat::records;
      else if (f == "csv")
        cfg.format = OutputFormat::csv;
      else
        throw ConfigError("output.format", "expected \"records\" or \"csv\"");
    }
  }

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

SystemModel make_model(const ExperimentConfig& cfg) { return make_forklift_model(cfg.forklift); }

DetectorConfig make_detector(const ExperimentConfig& cfg) {
  return DetectorConfig::from_confidence(2, cfg.reach.detector_confidence);
}

RiskField make_risk_field(const ExperimentConfig& cfg) {
  return build_field(cfg.risk_sets, cfg.dilution_factor, cfg.dilution_levels, cfg.correlation);
}

}  // namespace reachrisk
