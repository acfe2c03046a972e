#include "reachrisk/risk.hpp"

#include <cmath>

namespace reachrisk {

namespace {

void check_correlation(const Eigen::MatrixXd& C, Eigen::Index events) {
  if (C.rows() != events || C.cols() != events)
    throw std::invalid_argument("risk correlation: size must match event count");
  for (Eigen::Index i = 0; i < C.rows(); ++i) {
    if (std::abs(C(i, i) - 1.0) > 1e-12)
      throw std::invalid_argument("risk correlation: diagonal must be 1");
    for (Eigen::Index j = 0; j < C.cols(); ++j) {
      if (std::abs(C(i, j) - C(j, i)) > 1e-12)
        throw std::invalid_argument("risk correlation: matrix must be symmetric");
      if (C(i, j) < -1.0 - 1e-12 || C(i, j) > 1.0 + 1e-12)
        throw std::invalid_argument("risk correlation: entries must lie in [-1, 1]");
    }
  }
}

Zonotope project(const Zonotope& z, const std::vector<Eigen::Index>& subspace) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(subspace.size()), z.dim());
  for (size_t r = 0; r < subspace.size(); ++r) {
    if (subspace[r] < 0 || subspace[r] >= z.dim())
      throw std::invalid_argument("risk subspace: state index out of range");
    L(static_cast<Eigen::Index>(r), subspace[r]) = 1.0;
  }
  return linear_map(L, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(subspace.size())), z);
}

}  // namespace

RiskSet dilute(const RiskSet& rs, double factor, int level) {
  if (factor <= 1.0) throw std::invalid_argument("dilute: dilution factor must exceed 1");
  if (level < 0) throw std::invalid_argument("dilute: level must be non-negative");
  const double scale = std::pow(factor, level);
  const double n_s = static_cast<double>(rs.region.dim());
  RiskSet out = rs;
  out.region = Zonotope(rs.region.center(), scale * rs.region.generators());
  out.risk = rs.risk / std::pow(factor, level * n_s);
  return out;
}

RiskField build_field(const std::vector<RiskSet>& risk_sets, double factor, int levels,
                      const Eigen::MatrixXd& correlation) {
  if (levels < 0) throw std::invalid_argument("build_field: levels must be non-negative");
  if (factor <= 1.0) throw std::invalid_argument("build_field: dilution factor must exceed 1");
  check_correlation(correlation, static_cast<Eigen::Index>(risk_sets.size()));
  for (const auto& rs : risk_sets) {
    if (rs.risk < 0.0) throw std::invalid_argument("build_field: risk must be non-negative");
    if (rs.region.dim() != static_cast<Eigen::Index>(rs.subspace.size()))
      throw std::invalid_argument("build_field: region dimension must match subspace length");
  }

  RiskField field;
  field.dilution_factor = factor;
  field.correlation = correlation;
  for (const auto& rs : risk_sets) {
    std::vector<RiskSet> seq;
    seq.reserve(static_cast<size_t>(levels) + 1);
    for (int j = 0; j <= levels; ++j) seq.push_back(dilute(rs, factor, j));
    field.sequences.push_back(std::move(seq));
  }
  return field;
}

RiskReport rr_metric(const Flowpipe& flowpipe, const RiskField& field, double beta) {
  const Eigen::Index m = static_cast<Eigen::Index>(field.sequences.size());
  check_correlation(field.correlation, m);

  RiskReport report;
  report.zeta = Eigen::VectorXd::Zero(m);
  report.matched_level.assign(static_cast<size_t>(m), -1);

  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& seq = field.sequences[static_cast<size_t>(i)];
    if (seq.empty()) continue;

    std::vector<Zonotope> projected;
    projected.reserve(flowpipe.segments.size());
    for (const auto& seg : flowpipe.segments)
      projected.push_back(project(seg.set, seq.front().subspace));

    // Risk decays with the level, so the first intersecting level carries
    // the event's maximum.
    for (size_t j = 0; j < seq.size(); ++j) {
      bool hit = false;
      for (const auto& z : projected) {
        if (intersects(z, seq[j].region)) {
          hit = true;
          break;
        }
      }
      if (hit) {
        report.zeta[i] = seq[j].risk;
        report.matched_level[static_cast<size_t>(i)] = static_cast<int>(j);
        break;
      }
    }
  }

  report.total = beta * report.zeta.dot(field.correlation * report.zeta);
  return report;
}

std::vector<std::pair<double, RiskReport>> risk_time_series(
    const std::vector<std::pair<double, Flowpipe>>& flowpipes, const RiskField& field,
    double beta) {
  std::vector<std::pair<double, RiskReport>> out;
  out.reserve(flowpipes.size());
  for (const auto& [t, fp] : flowpipes) out.emplace_back(t, rr_metric(fp, field, beta));
  return out;
}

}  // namespace reachrisk
