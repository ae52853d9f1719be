#pragma once

// JSON forms of matrices, algebras, states, witnesses and certificates.
// Complex matrices are nested row-major arrays of [re, im] pairs.

#include <string>

#include <nlohmann/json.hpp>

#include "opalg/embeddings.hpp"
#include "opalg/gns.hpp"
#include "opalg/separability.hpp"

namespace opalg {

using Json = nlohmann::json;

Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Matrix matrix_from_json(const Json& j);
Vector vector_from_json(const Json& j);

// {"label", "blocks"} for canonical algebras, {"label", "ambient",
// "generators"} for subalgebras (the basis is written as generators).
Json to_json(const MatrixAlgebra& a);
// Generators are closed under generated_star_algebra.
MatrixAlgebra algebra_from_json(const Json& j, double tol = kDefaultTol);

Json to_json(const TensorAlgebra& t);

Json to_json(const State& s);
State state_from_json(const Json& j, const MatrixAlgebra& owner);

// Elements are written as their ambient matrices.
AlgebraElement element_from_json(const Json& j, const MatrixAlgebra& owner);

Json to_json(const ChshObservables& obs);
ChshObservables observables_from_json(const Json& j, const TensorAlgebra& t);

Json to_json(const ChshReport& r);
Json to_json(const SeparationWitness& w);
Json to_json(const Decomposition& d);
Decomposition decomposition_from_json(const Json& j, const TensorAlgebra& t);
Json to_json(const PptResult& p);
Json to_json(const Certificate& c);
Json to_json(const Representation& pi);

// Pretty-printed JSON with keys sorted and every float written with 17
// significant digits, so equal documents serialize to equal bytes.
std::string dump_fixed(const Json& j);

}  // namespace opalg
