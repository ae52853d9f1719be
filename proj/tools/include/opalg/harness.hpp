#pragma once

// Experiment configs, dispatch and report rendering behind the opalg CLI.

#include <cstdint>
#include <optional>
#include <string>

#include "opalg/errors.hpp"
#include "opalg/serialize.hpp"

namespace opalg::harness {

// Invalid configuration: unknown experiment, bad budget, malformed JSON or
// presentation. The message carries line/column for parse errors.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A witness failed to reproduce from its serialized form.
class VerificationError : public Error {
 public:
  using Error::Error;
};

enum class Format { json, csv };

struct Budgets {
  int restarts = 20;
  int max_iter = 500;
  int max_terms = 200;
  int inner_restarts = 8;
  double seesaw_tol = 1e-10;
  double decomposition_tol = 1e-6;
  double structure_tol = 1e-9;
};

struct ExperimentConfig {
  std::string experiment;
  Json left;
  Json right;
  std::uint64_t seed = 0;
  Budgets budgets;
  // certify only: a state on the product algebra, the string "bohm-bell",
  // or absent (a random state is sampled from the seed).
  Json state;
  std::string out;  // empty: stdout
  Format format = Format::json;
};

const char* report_schema_version();

bool is_known_experiment(const std::string& name);

// Parses and validates a config document. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Runs the experiment and returns the report, after re-verifying every
// witness from its serialized form.
Json run_experiment(const ExperimentConfig& config);

// Throws VerificationError when a witness in `report` does not reproduce.
void verify_report(const Json& report);

std::string render(const Json& report, Format format);

// Parses a JSON report; throws FormatError on a schema major-version
// mismatch or a missing version.
Json parse_report(const std::string& text);

// Runs, renders and writes. Returns the process exit status: 0 on
// completion, 2 on invalid config, 1 on any other failure.
int run(const ExperimentConfig& config);

}  // namespace opalg::harness
