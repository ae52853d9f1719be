#include "opalg/serialize.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>

#include "opalg/errors.hpp"

namespace opalg {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError("complex entries are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void dump_inline(const Json& j, std::string& out) {
  if (j.is_array()) {
    out += "[";
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (k > 0) out += ", ";
      dump_inline(j[k], out);
    }
    out += "]";
  } else if (j.is_number_float()) {
    out += format_number(j.get<double>());
  } else {
    out += j.dump();
  }
}

void dump_into(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_into(it.value(), indent + 2, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Scalars, [re, im] pairs and matrix rows stay on one line.
      const auto scalar_array = [](const Json& e) {
        return e.is_array() && std::all_of(e.begin(), e.end(), [](const Json& x) { return x.is_primitive(); });
      };
      const bool flat = std::all_of(j.begin(), j.end(), [&](const Json& e) {
        return e.is_primitive() || scalar_array(e) ||
               (e.is_array() && std::all_of(e.begin(), e.end(), scalar_array));
      });
      if (flat) {
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k > 0) out += ", ";
          dump_inline(j[k], out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k > 0) out += ",\n";
        out += pad;
        dump_into(j[k], indent + 2, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      out += format_number(j.get<double>());
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
  return out;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw FormatError("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("vector must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k]);
  return v;
}

Json to_json(const MatrixAlgebra& a) {
  Json out;
  out["label"] = a.label();
  if (a.is_canonical()) {
    out["blocks"] = a.block_dims();
  } else {
    out["ambient"] = a.ambient_dim();
    Json gens = Json::array();
    for (const Matrix& b : a.basis()) gens.push_back(to_json(b));
    out["generators"] = std::move(gens);
  }
  return out;
}

MatrixAlgebra algebra_from_json(const Json& j, double tol) {
  if (!j.is_object()) throw FormatError("algebra presentation must be an object");
  const std::string label = j.contains("label") ? j.at("label").get<std::string>() : std::string();
  if (j.contains("blocks")) {
    const Json& blocks = j.at("blocks");
    if (!blocks.is_array()) throw FormatError("'blocks' must be an array of integers");
    std::vector<int> dims;
    for (const Json& b : blocks) {
      if (!b.is_number_integer()) throw FormatError("'blocks' must be an array of integers");
      dims.push_back(b.get<int>());
    }
    return make_algebra(std::move(dims), label);
  }
  const Json& ambient = field(j, "ambient");
  if (!ambient.is_number_integer() || ambient.get<int>() < 1) throw FormatError("'ambient' must be a positive integer");
  const int n = ambient.get<int>();
  std::vector<Matrix> gens;
  for (const Json& g : field(j, "generators")) {
    Matrix m = matrix_from_json(g);
    if (m.rows() != n || m.cols() != n) throw FormatError("generator shape does not match 'ambient'");
    gens.push_back(std::move(m));
  }
  MatrixAlgebra generated = generated_star_algebra(n, gens, tol);
  return MatrixAlgebra::subalgebra(n, generated.basis(), label, tol);
}

Json to_json(const TensorAlgebra& t) {
  Json pairs = Json::array();
  for (const auto& [i, j] : t.pair_index()) pairs.push_back({i, j});
  return {{"left", to_json(t.left())}, {"right", to_json(t.right())}, {"pair_index", std::move(pairs)},
          {"blocks", t.product().block_dims()}};
}

Json to_json(const State& s) {
  Json dens = Json::array();
  for (const Matrix& d : s.densities()) dens.push_back(to_json(d));
  return {{"weights", s.weights()}, {"densities", std::move(dens)}};
}

State state_from_json(const Json& j, const MatrixAlgebra& owner) {
  std::vector<double> weights;
  for (const Json& w : field(j, "weights")) {
    if (!w.is_number()) throw FormatError("weights must be numbers");
    weights.push_back(w.get<double>());
  }
  std::vector<Matrix> dens;
  for (const Json& d : field(j, "densities")) dens.push_back(matrix_from_json(d));
  return State(owner, std::move(weights), std::move(dens));
}

AlgebraElement element_from_json(const Json& j, const MatrixAlgebra& owner) {
  const Matrix m = matrix_from_json(j);
  if (m.rows() != owner.ambient_dim() || m.cols() != owner.ambient_dim())
    throw FormatError("element shape does not match the algebra");
  return owner.from_ambient(m, 1e-8);
}

Json to_json(const ChshObservables& obs) {
  return {{"A", to_json(obs.a.ambient())},
          {"A_prime", to_json(obs.a_prime.ambient())},
          {"B", to_json(obs.b.ambient())},
          {"B_prime", to_json(obs.b_prime.ambient())}};
}

ChshObservables observables_from_json(const Json& j, const TensorAlgebra& t) {
  return {element_from_json(field(j, "A"), t.left()), element_from_json(field(j, "A_prime"), t.left()),
          element_from_json(field(j, "B"), t.right()), element_from_json(field(j, "B_prime"), t.right())};
}

Json to_json(const ChshReport& r) {
  return {{"observables", to_json(r.observables)},
          {"signs", {r.signs[0], r.signs[1]}},
          {"value", r.value},
          {"iterations", r.iterations},
          {"restarts_used", r.restarts_used},
          {"converged", r.converged},
          {"history", r.history}};
}

Json to_json(const SeparationWitness& w) {
  return {{"algebra", to_json(w.algebra)},
          {"state", to_json(w.state)},
          {"observables", to_json(w.observables)},
          {"value", w.value}};
}

Json to_json(const Decomposition& d) {
  Json terms = Json::array();
  for (const ProductTerm& term : d.terms)
    terms.push_back({{"weight", term.weight}, {"left", to_json(term.left)}, {"right", to_json(term.right)}});
  return {{"terms", std::move(terms)}, {"residual", d.residual}};
}

Decomposition decomposition_from_json(const Json& j, const TensorAlgebra& t) {
  Decomposition d;
  for (const Json& term : field(j, "terms")) {
    d.terms.push_back({field(term, "weight").get<double>(), state_from_json(field(term, "left"), t.left()),
                       state_from_json(field(term, "right"), t.right())});
  }
  d.residual = field(j, "residual").get<double>();
  return d;
}

Json to_json(const PptResult& p) { return {{"passed", p.passed}, {"min_eigenvalue", p.min_eigenvalue}}; }

Json to_json(const Certificate& c) {
  Json out{{"verdict", to_string(c.verdict)}, {"ppt", to_json(c.ppt)}, {"best_residual", c.best_residual}};
  out["decomposition"] = c.decomposition ? to_json(*c.decomposition) : Json(nullptr);
  out["chsh"] = c.chsh ? to_json(*c.chsh) : Json(nullptr);
  return out;
}

Json to_json(const Representation& pi) {
  Json images = Json::array();
  for (const Matrix& m : pi.images) images.push_back(to_json(m));
  Json out{{"source", to_json(pi.source)}, {"carrier_dim", pi.carrier_dim}, {"images", std::move(images)}};
  out["cyclic_vector"] = pi.cyclic_vector ? to_json(*pi.cyclic_vector) : Json(nullptr);
  return out;
}

std::string dump_fixed(const Json& j) {
  std::string out;
  dump_into(j, 0, out);
  out += "\n";
  return out;
}

}  // namespace opalg
