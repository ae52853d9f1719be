#pragma once

// Dense complex linear algebra shared by every module: Kronecker and partial
// trace helpers, spectral functions of Hermitian matrices, seeded random
// draws, and an incremental orthonormal basis of matrix spans.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace opalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr double kDefaultTol = 1e-9;

// Reproducible sub-stream seed (splitmix64 finalizer over seed and stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

// rho acts on C^n (x) C^m.
Matrix partial_trace_right(const Matrix& rho, int n, int m);
Matrix partial_trace_left(const Matrix& rho, int n, int m);
Matrix partial_transpose_right(const Matrix& rho, int n, int m);

// tr(a^* b)
Complex trace_inner(const Matrix& a, const Matrix& b);

Matrix hermitian_part(const Matrix& a);
double op_norm(const Matrix& a);
RealVector hermitian_eigenvalues(const Matrix& h);
double trace_norm_hermitian(const Matrix& h);

// Eigenvalue-wise sign of a Hermitian matrix; eigenvalues with
// |lambda| <= zero_tol map to 0.
Matrix hermitian_sign(const Matrix& h, double zero_tol);

struct EigenPair {
  double value = 0.0;
  Vector vector;
};

// Largest eigenvalue of a Hermitian matrix with a unit eigenvector.
EigenPair top_eigenpair(const Matrix& h);

// Eigenvalue clusters of a Hermitian matrix: orthogonal spectral projections
// for groups of eigenvalues closer than tol, ordered by increasing eigenvalue.
struct SpectralCluster {
  double value = 0.0;
  Matrix basis;  // orthonormal columns spanning the eigenspace
};
std::vector<SpectralCluster> spectral_clusters(const Matrix& h, double tol);

Matrix random_gaussian(int rows, int cols, Rng& rng);
Matrix random_hermitian(int n, Rng& rng);
Vector random_unit_vector(int n, Rng& rng);

// Orthonormal basis (trace inner product) of a growing span of n x n
// matrices. Candidates whose residual after projection is at most
// tol * max(1, |candidate|_F) are rejected as already spanned.
class SpanBuilder {
 public:
  SpanBuilder(int n, double tol);

  // Returns true if the candidate enlarged the span.
  bool add(const Matrix& candidate);
  // Adds each candidate in order; returns how many enlarged the span.
  int add_all(const std::vector<Matrix>& candidates);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double tol() const { return tol_; }

  Matrix element(int k) const;
  std::vector<Matrix> elements() const;

  // Orthogonal projection onto the span, and the Frobenius residual.
  Matrix project(const Matrix& x) const;
  double residual(const Matrix& x) const;

 private:
  int n_;
  double tol_;
  int dim_ = 0;
  Matrix columns_;  // n^2 x capacity, first dim_ columns orthonormal
};

}  // namespace opalg
