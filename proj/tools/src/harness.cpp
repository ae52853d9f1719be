#include "opalg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "opalg/errors.hpp"

namespace opalg::harness {

namespace {

constexpr const char* kExperiments[] = {"separation", "max-chsh", "certify", "counterexample",
                                        "representation-check"};

// Tolerance for reproducing a serialized CHSH value.
constexpr double kReplayTol = 1e-9;

std::string where(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

int positive_int(const Json& budgets, const char* key, int fallback) {
  if (!budgets.contains(key)) return fallback;
  const Json& v = budgets.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0 || v.get<long long>() > 1000000)
    throw ConfigError(std::string("budgets.") + key + " must be a positive integer");
  return v.get<int>();
}

double tolerance(const Json& budgets, const char* key, double fallback) {
  if (!budgets.contains(key)) return fallback;
  const Json& v = budgets.at(key);
  if (!v.is_number() || !(v.get<double>() > 0.0) || !(v.get<double>() < 1.0))
    throw ConfigError(std::string("budgets.") + key + " must lie in (0, 1)");
  return v.get<double>();
}

Json budgets_to_json(const Budgets& b) {
  return {{"restarts", b.restarts},
          {"max_iter", b.max_iter},
          {"max_terms", b.max_terms},
          {"inner_restarts", b.inner_restarts},
          {"seesaw_tol", b.seesaw_tol},
          {"decomposition_tol", b.decomposition_tol},
          {"structure_tol", b.structure_tol}};
}

SeesawOptions seesaw_options(const Budgets& b) { return {b.restarts, b.max_iter, b.seesaw_tol}; }

DecompositionOptions decomposition_options(const Budgets& b) {
  DecompositionOptions o;
  o.max_terms = b.max_terms;
  o.tol = b.decomposition_tol;
  o.inner_restarts = b.inner_restarts;
  return o;
}

MatrixAlgebra factor(const Json& j, const Budgets& b) { return algebra_from_json(j, b.structure_tol); }

TensorAlgebra tensor_from_report(const Json& j) {
  return TensorAlgebra(algebra_from_json(j.at("left")), algebra_from_json(j.at("right")));
}

double replay_chsh(const Json& algebra, const Json& state, const Json& observables) {
  const TensorAlgebra t = tensor_from_report(algebra);
  const State s = state_from_json(state, t.product());
  const ChshObservables obs = observables_from_json(observables, t);
  validate_observables(obs, t);
  return chsh_value(s, t, obs);
}

void expect_value(double replayed, const Json& reported, const std::string& what) {
  const double v = reported.get<double>();
  if (!(std::abs(replayed - v) <= kReplayTol))
    throw VerificationError(what + ": serialized witness gives " + std::to_string(replayed) + ", report says " +
                            std::to_string(v));
}

Json run_separation(const ExperimentConfig& c) {
  const MatrixAlgebra a1 = factor(c.left, c.budgets);
  const MatrixAlgebra a2 = factor(c.right, c.budgets);
  const SeparationVerdict v = is_separated(a1, a2, c.budgets.structure_tol);
  Json out{{"separated", v.separated},
           {"left_commutative", is_commutative(a1, c.budgets.structure_tol)},
           {"right_commutative", is_commutative(a2, c.budgets.structure_tol)}};
  out["witness"] = v.witness ? to_json(*v.witness) : Json(nullptr);
  if (v.witness) out["value"] = v.witness->value;
  return out;
}

Json run_max_chsh(const ExperimentConfig& c) {
  const TensorAlgebra t(factor(c.left, c.budgets), factor(c.right, c.budgets));
  const GlobalChshResult r = seesaw_global(t, c.seed, seesaw_options(c.budgets));
  return {{"algebra", to_json(t)},
          {"value", r.report.value},
          {"classical_bound_exceeded", r.report.value > 2.0 + 1e-8},
          {"report", to_json(r.report)},
          {"state", to_json(r.state)}};
}

Json run_certify(const ExperimentConfig& c) {
  const TensorAlgebra t(factor(c.left, c.budgets), factor(c.right, c.budgets));
  std::optional<State> state;
  std::string source;
  if (c.state.is_null()) {
    state = random_state(t.product(), derive_seed(c.seed, 7));
    source = "random";
  } else if (c.state.is_string()) {
    const MatrixUnits l = embed_m2(t.left(), c.budgets.structure_tol);
    const MatrixUnits r = embed_m2(t.right(), c.budgets.structure_tol);
    state = bohm_bell_state(t, l, r);
    source = "bohm-bell";
  } else {
    state = state_from_json(c.state, t.product());
    source = "config";
  }
  CertifyBudgets budgets{seesaw_options(c.budgets), decomposition_options(c.budgets)};
  const Certificate cert = certify_state(*state, t, c.seed, budgets);
  return {{"algebra", to_json(t)},
          {"state_source", source},
          {"state", to_json(*state)},
          {"verdict", to_string(cert.verdict)},
          {"certificate", to_json(cert)}};
}

Json run_counterexample(const ExperimentConfig& c) {
  const TensorAlgebra t(factor(c.left, c.budgets), factor(c.right, c.budgets));
  const double tol = c.budgets.structure_tol;
  if (is_commutative(t.left(), tol) || is_commutative(t.right(), tol)) {
    return {{"algebra", to_json(t)}, {"constructed", false}, {"reason", "a factor is commutative"}};
  }
  const MatrixUnits l = embed_m2(t.left(), tol);
  const MatrixUnits r = embed_m2(t.right(), tol);
  const State state = bohm_bell_state(t, l, r);
  const ChshObservables obs = tsirelson_observables(l, r);
  const double value = chsh_value(state, t, obs);
  return {{"algebra", to_json(t)},
          {"constructed", true},
          {"state", to_json(state)},
          {"observables", to_json(obs)},
          {"value", value},
          {"tsirelson_gap", std::abs(value - 2.0 * std::sqrt(2.0))},
          {"matrix_unit_defect", std::max(matrix_unit_defect(l), matrix_unit_defect(r))}};
}

Json run_representation_check(const ExperimentConfig& c) {
  const TensorAlgebra t(factor(c.left, c.budgets), factor(c.right, c.budgets));
  const double tol = c.budgets.structure_tol;
  Json reps = Json::array();
  bool all_separated = true;
  bool all_factorize = true;
  std::size_t block = 0;
  for (const Representation& pi : irreducible_representations(t.product())) {
    const bool sep = separated_in_representation(pi, t, tol);
    const bool fac = check_tensor_factorization(pi, t);
    all_separated = all_separated && sep;
    all_factorize = all_factorize && fac;
    const auto [i, j] = t.pair_of(block++);
    reps.push_back({{"left_block", i},
                    {"right_block", j},
                    {"carrier_dim", pi.carrier_dim},
                    {"irreducible", is_irreducible(pi, tol)},
                    {"defect", representation_defect(pi)},
                    {"separated", sep},
                    {"factorizes", fac}});
  }
  const bool identity_factorizes = check_tensor_factorization(identity_representation(t.product()), t);
  const bool separated = is_separated(t.left(), t.right(), tol).separated;
  return {{"algebra", to_json(t)},
          {"representations", std::move(reps)},
          {"separated", separated},
          {"separated_in_all_irreducibles", all_separated},
          {"equivalence_holds", separated == all_separated},
          {"irreducibles_factorize", all_factorize},
          {"identity_factorizes", identity_factorizes}};
}

void flatten(const Json& j, const std::string& prefix, std::map<std::string, std::string>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const Json& v = it.value();
    if (v.is_object()) {
      flatten(v, key, out);
    } else if (v.is_primitive() && !v.is_null()) {
      // Reuse the fixed-precision writer for numbers.
      std::string s = dump_fixed(v);
      s.pop_back();
      if (v.is_string()) s = v.get<std::string>();
      out[key] = s;
    }
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

const char* report_schema_version() { return "1.0.0"; }

bool is_known_experiment(const std::string& name) {
  for (const char* e : kExperiments)
    if (name == e) return true;
  return false;
}

ExperimentConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config is not valid JSON at " + where(text, e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentConfig c;
  if (j.contains("experiment")) {
    if (!j["experiment"].is_string()) throw ConfigError("'experiment' must be a string");
    c.experiment = j["experiment"].get<std::string>();
    if (!is_known_experiment(c.experiment)) throw ConfigError("unknown experiment '" + c.experiment + "'");
  }
  if (!j.contains("left") || !j.contains("right")) throw ConfigError("config needs 'left' and 'right' algebras");
  c.left = j["left"];
  c.right = j["right"];
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("budgets")) {
    const Json& b = j["budgets"];
    if (!b.is_object()) throw ConfigError("'budgets' must be an object");
    static const char* known[] = {"restarts",   "max_iter",          "max_terms",    "inner_restarts",
                                  "seesaw_tol", "decomposition_tol", "structure_tol"};
    for (auto it = b.begin(); it != b.end(); ++it) {
      if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known))
        throw ConfigError("unknown budget '" + it.key() + "'");
    }
    c.budgets.restarts = positive_int(b, "restarts", c.budgets.restarts);
    c.budgets.max_iter = positive_int(b, "max_iter", c.budgets.max_iter);
    c.budgets.max_terms = positive_int(b, "max_terms", c.budgets.max_terms);
    c.budgets.inner_restarts = positive_int(b, "inner_restarts", c.budgets.inner_restarts);
    c.budgets.seesaw_tol = tolerance(b, "seesaw_tol", c.budgets.seesaw_tol);
    c.budgets.decomposition_tol = tolerance(b, "decomposition_tol", c.budgets.decomposition_tol);
    c.budgets.structure_tol = tolerance(b, "structure_tol", c.budgets.structure_tol);
  }
  if (j.contains("state")) {
    c.state = j["state"];
    if (c.state.is_string() && c.state.get<std::string>() != "bohm-bell")
      throw ConfigError("'state' must be an object or \"bohm-bell\"");
  }
  if (j.contains("output")) {
    const Json& o = j["output"];
    if (o.contains("path")) c.out = o["path"].get<std::string>();
    if (o.contains("format")) {
      const std::string f = o["format"].get<std::string>();
      if (f == "json") c.format = Format::json;
      else if (f == "csv") c.format = Format::csv;
      else throw ConfigError("output.format must be json or csv");
    }
  }
  // Presentations are validated up front so bad blocks exit as invalid config.
  try {
    (void)factor(c.left, c.budgets);
    (void)factor(c.right, c.budgets);
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid algebra presentation: ") + e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("invalid algebra presentation: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void verify_report(const Json& report) {
  const std::string& experiment = report.at("experiment").get_ref<const std::string&>();
  const Json& r = report.at("result");
  if (experiment == "separation" && !r.at("witness").is_null()) {
    const Json& w = r.at("witness");
    const double v = replay_chsh(w.at("algebra"), w.at("state"), w.at("observables"));
    expect_value(v, w.at("value"), "separation witness");
    if (!(v > 2.0 + 1e-8)) throw VerificationError("separation witness does not violate the CHSH bound");
  } else if (experiment == "max-chsh") {
    const double v = replay_chsh(r.at("algebra"), r.at("state"), r.at("report").at("observables"));
    expect_value(v, r.at("value"), "max-chsh report");
  } else if (experiment == "counterexample" && r.at("constructed").get<bool>()) {
    const double v = replay_chsh(r.at("algebra"), r.at("state"), r.at("observables"));
    expect_value(v, r.at("value"), "counterexample");
  } else if (experiment == "certify") {
    const Json& cert = r.at("certificate");
    const TensorAlgebra t = tensor_from_report(r.at("algebra"));
    const State target = state_from_json(r.at("state"), t.product());
    if (!cert.at("decomposition").is_null()) {
      const Decomposition d = decomposition_from_json(cert.at("decomposition"), t);
      double total = 0.0;
      for (const ProductTerm& term : d.terms) total += term.weight;
      if (std::abs(total - 1.0) > 1e-10) throw VerificationError("decomposition weights do not sum to 1");
      const double residual = remix_residual(d, target, t);
      if (residual > d.residual + 1e-12)
        throw VerificationError("decomposition re-mixes to residual " + std::to_string(residual));
    }
    if (!cert.at("chsh").is_null()) {
      const double v = replay_chsh(r.at("algebra"), r.at("state"), cert.at("chsh").at("observables"));
      expect_value(v, cert.at("chsh").at("value"), "certificate CHSH witness");
    }
  }
}

Json run_experiment(const ExperimentConfig& config) {
  Json result;
  if (config.experiment == "separation") result = run_separation(config);
  else if (config.experiment == "max-chsh") result = run_max_chsh(config);
  else if (config.experiment == "certify") result = run_certify(config);
  else if (config.experiment == "counterexample") result = run_counterexample(config);
  else if (config.experiment == "representation-check") result = run_representation_check(config);
  else throw ConfigError("unknown experiment '" + config.experiment + "'");

  Json report{{"schema_version", report_schema_version()},
              {"experiment", config.experiment},
              {"seed", config.seed},
              {"config", {{"left", config.left}, {"right", config.right}, {"budgets", budgets_to_json(config.budgets)}}},
              {"result", std::move(result)}};
  // Verify what will actually be written: the fixed-precision text.
  verify_report(Json::parse(dump_fixed(report)));
  return report;
}

std::string render(const Json& report, Format format) {
  if (format == Format::json) return dump_fixed(report);
  std::map<std::string, std::string> fields;
  flatten(report, "", fields);
  std::string header;
  std::string row;
  for (const auto& [k, v] : fields) {
    if (!header.empty()) {
      header += ",";
      row += ",";
    }
    header += csv_field(k);
    row += csv_field(v);
  }
  return header + "\n" + row + "\n";
}

Json parse_report(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError("report is not valid JSON at " + where(text, e.byte));
  }
  if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_string())
    throw FormatError("report has no schema_version");
  const std::string v = j["schema_version"].get<std::string>();
  const std::string ours = report_schema_version();
  const auto major = [](const std::string& s) { return s.substr(0, s.find('.')); };
  if (major(v) != major(ours))
    throw FormatError("report schema " + v + " is incompatible with " + ours);
  return j;
}

int run(const ExperimentConfig& config) {
  std::string text;
  try {
    text = render(run_experiment(config), config.format);
  } catch (const ConfigError& e) {
    std::cerr << "opalg: invalid config: " << e.what() << "\n";
    return 2;
  } catch (const InvalidPresentation& e) {
    std::cerr << "opalg: invalid config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "opalg: " << config.experiment << " failed: " << e.what() << "\n";
    return 1;
  }
  if (config.out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(config.out, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "opalg: cannot write '" << config.out << "'\n";
    return 1;
  }
  return 0;
}

}  // namespace opalg::harness
