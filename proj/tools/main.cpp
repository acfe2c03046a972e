#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "reachrisk/commands.hpp"
#include "reachrisk/errors.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "experiment configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opt.seed, "override simulation.seed");
  cmd->add_option("--out", opt.out_dir, "override output.directory");
  cmd->add_option("--format", opt.format, "records|csv")
      ->check(CLI::IsMember({"records", "csv"}));
}

int load_and_run(const CommonOptions& opt, int (*run)(const reachrisk::ExperimentConfig&)) {
  reachrisk::ExperimentConfig cfg;
  try {
    cfg = reachrisk::load_config(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.out_dir) cfg.output_dir = *opt.out_dir;
    if (opt.format)
      cfg.format = *opt.format == "csv" ? reachrisk::OutputFormat::csv
                                        : reachrisk::OutputFormat::records;
  } catch (const reachrisk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return reachrisk::kExitConfigError;
  }
  return run(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set-based reachability and scenario risk assessment for noisy "
               "nonlinear control loops under stealthy sensor attacks"};
  app.require_subcommand(1);

  CommonOptions reach_opt;
  CLI::App* reach = app.add_subcommand("reach", "compute the flowpipe and write it out");
  add_common(reach, reach_opt);

  CommonOptions validate_opt;
  CLI::App* validate =
      app.add_subcommand("validate", "Monte-Carlo containment check of the flowpipe");
  add_common(validate, validate_opt);

  CommonOptions risk_opt;
  CLI::App* risk = app.add_subcommand("risk", "dynamic risk series along the nominal run");
  add_common(risk, risk_opt);

  CLI11_PARSE(app, argc, argv);

  if (reach->parsed()) return load_and_run(reach_opt, reachrisk::cmd_reach);
  if (validate->parsed()) return load_and_run(validate_opt, reachrisk::cmd_validate);
  if (risk->parsed()) return load_and_run(risk_opt, reachrisk::cmd_risk);
  return 1;
}
