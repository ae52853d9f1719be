#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "opalg/harness.hpp"

int main(int argc, char** argv) {
  namespace h = opalg::harness;
  CLI::App app{"Finite-dimensional operator-algebra experiments"};
  std::string experiment;
  std::string config_path;
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
  app.add_option("experiment", experiment,
                 "separation | max-chsh | certify | counterexample | representation-check")
      ->required();
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  auto* seed_opt = app.add_option("--seed", seed, "overrides the config seed");
  app.add_option("--out", out, "report path (default: stdout)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  h::ExperimentConfig config;
  try {
    if (!h::is_known_experiment(experiment)) throw h::ConfigError("unknown experiment '" + experiment + "'");
    config = h::load_config(config_path);
    if (!config.experiment.empty() && config.experiment != experiment)
      throw h::ConfigError("config is for '" + config.experiment + "', not '" + experiment + "'");
  } catch (const h::ConfigError& e) {
    std::cerr << "opalg: invalid config: " << e.what() << "\n";
    return 2;
  }
  config.experiment = experiment;
  if (*seed_opt) config.seed = seed;
  if (!out.empty()) config.out = out;
  if (!format.empty()) config.format = format == "csv" ? h::Format::csv : h::Format::json;
  return h::run(config);
}
