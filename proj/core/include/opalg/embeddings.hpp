#pragma once

// Copies of the 2x2 matrices inside noncommutative algebras, the singlet
// (Bohm-Bell) state on a pair of such copies, and the separation verdict with
// an explicit CHSH witness.

#include <optional>

#include "opalg/chsh.hpp"

namespace opalg {

// e_kl e_mn = delta_lm e_kn, e12^* = e21, e11 + e22 a projection.
struct MatrixUnits {
  AlgebraElement e11;
  AlgebraElement e12;
  AlgebraElement e21;
  AlgebraElement e22;
};

// Largest deviation over the 16 product relations and the adjoint relations.
double matrix_unit_defect(const MatrixUnits& u);

// Corner units e_{kl} (k, l in {1, 2}) of the largest noncommutative block.
// Throws NoEmbedding when the algebra is commutative.
MatrixUnits embed_m2(const MatrixAlgebra& a, double tol = kDefaultTol);

// Units built from two noncommuting projections through a generic eigenvalue
// lambda in (tol, 1 - tol) of PQP. Throws ContractViolation for commuting
// inputs or when every eigenvalue of PQP is 0 or 1.
MatrixUnits two_projection_units(const AlgebraElement& p, const AlgebraElement& q, double tol = 1e-6);

// A = X_L, A' = Z_L, B = (Z_R + X_R)/sqrt2, B' = (Z_R - X_R)/sqrt2 with
// Z = e11 - e22 and X = e12 + e21.
ChshObservables tsirelson_observables(const MatrixUnits& left, const MatrixUnits& right);

// Vector state (u1 (x) v2 - u2 (x) v1)/sqrt2 on the product block holding
// both corners.
State bohm_bell_state(const TensorAlgebra& t, const MatrixUnits& left, const MatrixUnits& right);

struct SeparationWitness {
  TensorAlgebra algebra;
  State state;
  ChshObservables observables;
  double value = 0.0;
};

struct SeparationVerdict {
  bool separated = false;
  std::optional<SeparationWitness> witness;
};

SeparationVerdict is_separated(const MatrixAlgebra& a1, const MatrixAlgebra& a2, double tol = kDefaultTol);

}  // namespace opalg
