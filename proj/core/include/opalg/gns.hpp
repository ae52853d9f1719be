#pragma once

// Representations of multi-matrix algebras: GNS construction, irreducibility,
// the generated von Neumann algebra of an image, and representation-level
// separation checks for tensor products.

#include <optional>
#include <vector>

#include "opalg/tensor_states.hpp"

namespace opalg {

struct Representation {
  MatrixAlgebra source;
  int carrier_dim = 0;
  // images[k] represents source.basis()[k].
  std::vector<Matrix> images;
  std::optional<Vector> cyclic_vector;

  // Linear extension to arbitrary elements / ambient matrices of the source.
  Matrix image(const AlgebraElement& x) const;
  Matrix image_of_ambient(const Matrix& x) const;
};

// Largest deviation from linearity-multiplicativity, *-preservation and
// unitality over all pairs of basis elements.
double representation_defect(const Representation& pi);

Representation identity_representation(const MatrixAlgebra& a);

// One irreducible representation per block of a canonical algebra (the block
// compressions); these exhaust the irreducibles up to equivalence.
std::vector<Representation> irreducible_representations(const MatrixAlgebra& a);

// GNS representation of `state` on `a`: Gram matrix w(a^* b) on the basis,
// quotient by eigenvalues <= tol * lambda_max, left multiplication on the
// quotient, cyclic vector the class of the identity.
Representation gns_construct(const State& state, const MatrixAlgebra& a, double tol = 1e-10);

bool is_irreducible(const Representation& pi, double tol = kDefaultTol);

// The *-algebra generated by the images (the double commutant).
MatrixAlgebra image_double_commutant(const Representation& pi, double tol = kDefaultTol);

// Restriction of a representation of t.product() to one factor through
// embed_left / embed_right.
Representation induced_representation(const Representation& pi, const TensorAlgebra& t, Side side);

// pi(A1 (x) A2)'' against the algebra generated by pi1(x) pi2(y).
bool check_tensor_factorization(const Representation& pi, const TensorAlgebra& t, double tol = 1e-8);

bool separated_in_representation(const Representation& pi, const TensorAlgebra& t, double tol = kDefaultTol);

}  // namespace opalg
