#include <doctest.h>

#include <cmath>

#include "opalg/harness.hpp"

using namespace opalg;
using namespace opalg::harness;

namespace {

ExperimentConfig config(const std::string& experiment, const std::string& left, const std::string& right,
                        const std::string& extra = "") {
  ExperimentConfig c = parse_config(R"({"left": {"label": "L", "blocks": )" + left +
                                    R"(}, "right": {"label": "R", "blocks": )" + right + "}" + extra + "}");
  c.experiment = experiment;
  return c;
}

}  // namespace

TEST_CASE("schema version") {
  CHECK(std::string(report_schema_version()) == "1.0.0");
  const Json r = run_experiment(config("separation", "[1,1]", "[2]"));
  CHECK(r["schema_version"] == "1.0.0");
  CHECK(run_experiment(config("counterexample", "[2]", "[2]"))["schema_version"] == "1.0.0");
}

TEST_CASE("report parser checks the major version") {
  CHECK_NOTHROW(parse_report(R"({"schema_version": "1.4.2"})"));
  CHECK_THROWS_AS(parse_report(R"({"schema_version": "2.0.0"})"), FormatError);
  CHECK_THROWS_AS(parse_report(R"({"experiment": "separation"})"), FormatError);
  CHECK_THROWS_AS(parse_report("{"), FormatError);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(parse_config(R"({"experiment": "teleport", "left": {"blocks": [2]}, "right": {"blocks": [2]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"left": {"blocks": [2]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"left": {"blocks": [0]}, "right": {"blocks": [2]}})"), ConfigError);
  CHECK_THROWS_AS(config("max-chsh", "[2]", "[2]", R"(, "budgets": {"restarts": 0})"), ConfigError);
  CHECK_THROWS_AS(config("max-chsh", "[2]", "[2]", R"(, "budgets": {"seesaw_tol": 1.5})"), ConfigError);
  CHECK_THROWS_AS(config("max-chsh", "[2]", "[2]", R"(, "budgets": {"speed": 3})"), ConfigError);
  CHECK_THROWS_AS(config("max-chsh", "[2]", "[2]", R"(, "seed": -1)"), ConfigError);
  try {
    parse_config("{\n  \"left\": {\"blocks\": [1,}\n}");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("experiments") {
  const Json sep = run_experiment(config("separation", "[1,1]", "[2]"));
  CHECK(sep["result"]["separated"] == true);
  CHECK(sep["result"]["witness"].is_null());

  const Json ce = run_experiment(config("counterexample", "[2]", "[2]"));
  CHECK(std::abs(ce["result"]["value"].get<double>() - 2.0 * std::sqrt(2.0)) <= 1e-9);

  const Json mc = run_experiment(config("max-chsh", "[1,1,1]", "[3]", R"(, "seed": 4)"));
  CHECK(mc["result"]["value"].get<double>() <= 2.0 + 1e-7);

  const Json cert = run_experiment(config("certify", "[2]", "[2]", R"(, "state": "bohm-bell")"));
  CHECK(cert["result"]["verdict"] == "not_decomposable");

  const Json rep = run_experiment(config("representation-check", "[1,2]", "[2,1]"));
  CHECK(rep["result"]["equivalence_holds"] == true);
  CHECK(rep["result"]["separated"] == false);
  CHECK(rep["result"]["representations"].size() == 4);
}

TEST_CASE("certify accepts an explicit state") {
  const ExperimentConfig c = config("certify", "[1,1]", "[1]",
                                    R"(, "state": {"weights": [0.25, 0.75], "densities": [[[[1,0]]], [[[1,0]]]]})");
  const Json r = run_experiment(c);
  CHECK(r["result"]["state_source"] == "config");
  CHECK(r["result"]["verdict"] == "decomposable");
}

TEST_CASE("tampered witnesses are refused") {
  Json r = run_experiment(config("counterexample", "[2]", "[2]"));
  CHECK_NOTHROW(verify_report(r));
  r["result"]["value"] = 2.9;
  CHECK_THROWS_AS(verify_report(r), VerificationError);

  Json s = run_experiment(config("separation", "[2]", "[2]"));
  s["result"]["witness"]["observables"]["A"] = s["result"]["witness"]["observables"]["A_prime"];
  CHECK_THROWS(verify_report(s));
}

TEST_CASE("rendering") {
  const ExperimentConfig c = config("counterexample", "[2]", "[2]", R"(, "seed": 5)");
  const std::string a = render(run_experiment(c), Format::json);
  const std::string b = render(run_experiment(c), Format::json);
  CHECK(a == b);
  CHECK(parse_report(a)["seed"] == 5);

  const std::string csv = render(run_experiment(c), Format::csv);
  const auto nl = csv.find('\n');
  REQUIRE(nl != std::string::npos);
  const std::string header = csv.substr(0, nl);
  CHECK(header.find("result.value") != std::string::npos);
  CHECK(header.find("schema_version") != std::string::npos);
  // Witness matrices stay out of the CSV.
  CHECK(header.find("observables") == std::string::npos);
  CHECK(header.find("state") == std::string::npos);
}
