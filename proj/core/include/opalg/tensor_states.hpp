#pragma once

// Tensor products of canonical multi-matrix algebras and states stored as
// block weights plus block density matrices.

#include <cstdint>
#include <utility>
#include <vector>

#include "opalg/algebra.hpp"

namespace opalg {

// A1 (x) A2 for canonical A1 = (+)_i M_{n_i}, A2 = (+)_j M_{m_j}. The product
// block at position i * |A2 blocks| + j is M_{n_i m_j}, with the left factor
// as the outer Kronecker index.
class TensorAlgebra {
 public:
  // Subalgebra-form factors are replaced by their canonical form.
  TensorAlgebra(const MatrixAlgebra& left, const MatrixAlgebra& right);

  const MatrixAlgebra& left() const { return left_; }
  const MatrixAlgebra& right() const { return right_; }
  const MatrixAlgebra& product() const { return product_; }

  const std::vector<std::pair<int, int>>& pair_index() const { return pairs_; }
  std::pair<int, int> pair_of(std::size_t product_block) const { return pairs_.at(product_block); }
  std::size_t block_of(int i, int j) const;

  AlgebraElement embed_left(const AlgebraElement& x) const;
  AlgebraElement embed_right(const AlgebraElement& y) const;
  AlgebraElement kron(const AlgebraElement& x, const AlgebraElement& y) const;

 private:
  MatrixAlgebra left_;
  MatrixAlgebra right_;
  MatrixAlgebra product_;
  std::vector<std::pair<int, int>> pairs_;
};

TensorAlgebra tensor_product(const MatrixAlgebra& a1, const MatrixAlgebra& a2);

class State {
 public:
  // Validates: weights >= 0 summing to 1, and each density with positive
  // weight self-adjoint, PSD and of unit trace within `tol`. Blocks with zero
  // weight keep an empty (0 x 0) density.
  State(MatrixAlgebra owner, std::vector<double> weights, std::vector<Matrix> densities, double tol = 1e-10);

  const MatrixAlgebra& owner() const { return owner_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Matrix>& densities() const { return densities_; }

  // (+)_i w_i rho_i as an ambient matrix.
  Matrix ambient_density() const;

 private:
  MatrixAlgebra owner_;
  std::vector<double> weights_;
  std::vector<Matrix> densities_;
};

Complex evaluate(const State& state, const AlgebraElement& x);

// Point mass on `block` with density |v><v|. Vectors within 1e-6 of unit
// norm are renormalized (reported through `renormalized`); others throw
// ContractViolation.
State vector_state(const MatrixAlgebra& a, std::size_t block, const Vector& v, bool* renormalized = nullptr);
State vector_state(const TensorAlgebra& t, std::size_t block, const Vector& v, bool* renormalized = nullptr);

// State given by a block-diagonal ambient density (trace one).
State state_from_density(const MatrixAlgebra& a, const Matrix& rho, double tol = 1e-10);

// Convex combination of states on the same algebra.
State mix(const std::vector<std::pair<double, State>>& parts);

State product_state(const TensorAlgebra& t, const State& left, const State& right);

enum class Side { left, right };

State reduced_state(const State& state, const TensorAlgebra& t, Side side);

bool is_pure(const State& state, double tol = 1e-9);

// Entrywise factorization test on the matrix-unit bases of both factors.
bool is_product_state(const State& state, const TensorAlgebra& t, double tol = 1e-8);

State random_state(const MatrixAlgebra& a, std::uint64_t seed);
State random_pure_state(const MatrixAlgebra& a, std::uint64_t seed);

}  // namespace opalg
