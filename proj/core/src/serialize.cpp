#include "reachrisk/serialize.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "reachrisk/errors.hpp"

namespace reachrisk {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ordered_json generators_json(const Eigen::MatrixXd& G) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index j = 0; j < G.cols(); ++j) a.push_back(vector_json(G.col(j)));
  return a;
}

ordered_json report_json(double t, const std::string& variant, const RiskReport& r) {
  ordered_json o;
  o["record"] = "risk";
  o["t"] = t;
  o["variant"] = variant;
  o["total"] = r.total;
  o["zeta"] = vector_json(r.zeta);
  o["matched_level"] = r.matched_level;
  return o;
}

}  // namespace

void write_flowpipe_records(std::ostream& out, const Flowpipe& fp, double dt) {
  ordered_json header;
  header["record"] = "header";
  header["kind"] = "flowpipe";
  header["dim"] = fp.segments.empty() ? 0 : fp.segments.front().set.dim();
  header["steps"] = fp.segments.size();
  header["dt"] = dt;
  out << header.dump() << "\n";
  for (const auto& seg : fp.segments) {
    ordered_json o;
    o["record"] = "segment";
    o["k"] = seg.k;
    o["t"] = seg.t;
    o["center"] = vector_json(seg.set.center());
    o["generators"] = generators_json(seg.set.generators());
    out << o.dump() << "\n";
  }
}

Flowpipe read_flowpipe_records(std::istream& in) {
  Flowpipe fp;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const ordered_json o = ordered_json::parse(line);
    if (o.at("record") != "segment") continue;
    const Eigen::Index dim = static_cast<Eigen::Index>(o.at("center").size());
    Eigen::VectorXd c(dim);
    for (Eigen::Index i = 0; i < dim; ++i) c[i] = o.at("center")[static_cast<size_t>(i)];
    const auto& gens = o.at("generators");
    Eigen::MatrixXd G(dim, static_cast<Eigen::Index>(gens.size()));
    for (size_t j = 0; j < gens.size(); ++j)
      for (Eigen::Index i = 0; i < dim; ++i)
        G(i, static_cast<Eigen::Index>(j)) = gens[j][static_cast<size_t>(i)];
    fp.segments.push_back({o.at("k").get<int>(), o.at("t").get<double>(), Zonotope(c, G)});
  }
  return fp;
}

void write_flowpipe_csv(std::ostream& out, const Flowpipe& fp) {
  if (fp.segments.empty()) return;
  const Eigen::Index dim = fp.segments.front().set.dim();
  out << "k,t";
  for (Eigen::Index i = 0; i < dim; ++i) out << ",lo" << i << ",hi" << i;
  out << "\n";
  for (const auto& seg : fp.segments) {
    const Interval box = to_interval(seg.set);
    out << seg.k << "," << seg.t;
    for (Eigen::Index i = 0; i < dim; ++i)
      out << "," << box.lower()[i] << "," << box.upper()[i];
    out << "\n";
  }
}

void write_validation_records(std::ostream& out, const ValidationReport& report) {
  for (size_t k = 0; k < report.contained_per_step.size(); ++k) {
    ordered_json o;
    o["record"] = "step";
    o["k"] = k + 1;
    o["contained"] = report.contained_per_step[k];
    o["total"] = report.trace_count;
    out << o.dump() << "\n";
  }
  ordered_json s;
  s["record"] = "summary";
  s["traces"] = report.trace_count;
  s["horizon"] = report.horizon;
  s["fraction"] = report.fraction;
  out << s.dump() << "\n";
}

void write_validation_csv(std::ostream& out, const ValidationReport& report) {
  out << "k,contained,total\n";
  for (size_t k = 0; k < report.contained_per_step.size(); ++k)
    out << (k + 1) << "," << report.contained_per_step[k] << "," << report.trace_count << "\n";
}

void write_risk_series_records(std::ostream& out, const RiskSeries& series) {
  ordered_json header;
  header["record"] = "header";
  header["kind"] = "risk_series";
  header["points"] = series.times.size();
  header["attack_free_threshold"] = series.attack_free_threshold;
  out << header.dump() << "\n";
  for (size_t i = 0; i < series.times.size(); ++i) {
    out << report_json(series.times[i], "attacked", series.attacked[i]).dump() << "\n";
    out << report_json(series.times[i], "attack_free", series.attack_free[i]).dump() << "\n";
  }
}

void write_risk_series_csv(std::ostream& out, const RiskSeries& series) {
  if (series.times.empty()) return;
  const Eigen::Index m = series.attacked.front().zeta.size();
  out << "t,variant,total";
  for (Eigen::Index i = 0; i < m; ++i) out << ",zeta" << i << ",level" << i;
  out << "\n";
  auto row = [&](double t, const char* variant, const RiskReport& r) {
    out << t << "," << variant << "," << r.total;
    for (Eigen::Index i = 0; i < m; ++i)
      out << "," << r.zeta[i] << "," << r.matched_level[static_cast<size_t>(i)];
    out << "\n";
  };
  for (size_t i = 0; i < series.times.size(); ++i) {
    row(series.times[i], "attacked", series.attacked[i]);
    row(series.times[i], "attack_free", series.attack_free[i]);
  }
}

}  // namespace reachrisk
