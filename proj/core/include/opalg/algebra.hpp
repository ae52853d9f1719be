#pragma once

// Finite-dimensional C*-algebras presented either canonically, as a direct
// sum of full matrix blocks M_{n_1} + ... + M_{n_k}, or as a unital
// *-subalgebra of an ambient matrix space spanned by an explicit basis.
// Every algebra carries a trace-orthonormal basis of ambient matrices, which
// is what the structural routines (commutant, generation, Wedderburn) work on.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opalg/linalg.hpp"

namespace opalg {

inline constexpr int kMaxAmbientDim = 64;

class AlgebraElement;

class MatrixAlgebra {
 public:
  // Canonical form. Throws InvalidPresentation on an empty list or a zero dim.
  static MatrixAlgebra canonical(std::vector<int> block_dims, std::string label = {});

  // Subalgebra form spanned by `spanning` inside M_{ambient_dim}. The span is
  // trace-orthonormalized; it must contain the ambient identity. Closure is
  // not checked here (generated_star_algebra produces closed spans and
  // wedderburn_decompose rejects non-closed ones).
  static MatrixAlgebra subalgebra(int ambient_dim, const std::vector<Matrix>& spanning,
                                  std::string label = {}, double tol = kDefaultTol);

  bool is_canonical() const;
  // Block sizes of the canonical form; empty for subalgebra form.
  const std::vector<int>& block_dims() const;
  // Offsets of the canonical blocks inside the ambient space.
  const std::vector<int>& block_offsets() const;
  // Shapes in which elements are stored: block_dims, or {ambient_dim}.
  std::vector<int> storage_dims() const;

  int ambient_dim() const;
  int linear_dim() const;
  // Trace-orthonormal ambient basis. Canonical order: block, row, column.
  const std::vector<Matrix>& basis() const;
  const std::string& label() const;

  // Same presentation: equal block lists (canonical) or the same instance.
  bool compatible(const MatrixAlgebra& other) const;

  AlgebraElement identity() const;
  AlgebraElement zero() const;
  AlgebraElement basis_element(int k) const;
  AlgebraElement from_blocks(std::vector<Matrix> blocks) const;
  // Wraps an ambient matrix; DomainError unless it lies in the algebra
  // (Frobenius residual <= tol * max(1, |m|)).
  AlgebraElement from_ambient(const Matrix& m, double tol = kDefaultTol) const;

  // Coefficients <b_k, x> of an ambient matrix in the orthonormal basis.
  Vector coordinates(const Matrix& x) const;

 private:
  struct Impl;
  explicit MatrixAlgebra(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

class AlgebraElement {
 public:
  AlgebraElement(MatrixAlgebra owner, std::vector<Matrix> blocks);

  const MatrixAlgebra& owner() const { return owner_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  const Matrix& block(std::size_t i) const { return blocks_.at(i); }

  Matrix ambient() const;
  AlgebraElement adjoint() const;
  bool is_self_adjoint(double tol) const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex s);

 private:
  void require_compatible(const AlgebraElement& other) const;

  MatrixAlgebra owner_;
  std::vector<Matrix> blocks_;

  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(Complex s, AlgebraElement a);
AlgebraElement operator*(double s, AlgebraElement a);

struct WedderburnData {
  std::vector<AlgebraElement> central_projections;
  std::vector<int> block_dims;
  std::vector<int> multiplicities;
  // Unitary U with U^* a U = (+)_i a_i (x) 1_{m_i}, blocks in block_dims
  // order, for every a in the algebra.
  Matrix change_of_basis;

  // Ambient image of the matrix unit e_{kl} (x) 1_m of block `block`.
  Matrix matrix_unit(std::size_t block, int k, int l) const;
};

MatrixAlgebra make_algebra(std::vector<int> block_dims, std::string label = {});

double op_norm(const AlgebraElement& x);

bool is_commutative(const MatrixAlgebra& a, double tol = kDefaultTol);

// Smallest unital *-subalgebra of M_{ambient_dim} containing the generators.
MatrixAlgebra generated_star_algebra(int ambient_dim, const std::vector<Matrix>& generators,
                                     double tol = kDefaultTol);

// {X : XM = MX for all M in a} as a subalgebra of the same ambient space.
MatrixAlgebra commutant(const MatrixAlgebra& a, double tol = kDefaultTol);

// Center of a closed algebra, as ambient matrices (orthonormal).
std::vector<Matrix> center(const MatrixAlgebra& a, double tol = kDefaultTol);

WedderburnData wedderburn_decompose(const MatrixAlgebra& a, double tol = kDefaultTol,
                                    std::uint64_t seed = 0, int max_retries = 5);

// Canonical algebra isomorphic to `a` (identity on canonical inputs).
MatrixAlgebra canonical_form(const MatrixAlgebra& a, double tol = kDefaultTol);

// Trace-orthogonal projection of an ambient matrix onto span(a).
AlgebraElement conditional_expectation(const Matrix& x, const MatrixAlgebra& a);

std::optional<std::pair<AlgebraElement, AlgebraElement>> find_noncommuting_projections(
    const MatrixAlgebra& a, double tol = kDefaultTol);

// Equal linear spans inside the same ambient space.
bool same_span(const MatrixAlgebra& a, const MatrixAlgebra& b, double tol = 1e-8);

}  // namespace opalg
