#pragma once

// Reference computations that avoid the library's block bookkeeping: states
// and observables are lifted into the full Kronecker space C^N1 (x) C^N2.

#include <cmath>

#include "opalg/opalg.hpp"

namespace oracle {

using opalg::Complex;
using opalg::Matrix;

// Loop-level partial trace over the right factor of C^n (x) C^m.
inline Matrix partial_trace_right(const Matrix& rho, int n, int m) {
  Matrix out = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < m; ++k) out(a, b) += rho(a * m + k, b * m + k);
  return out;
}

inline Matrix partial_trace_left(const Matrix& rho, int n, int m) {
  Matrix out = Matrix::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < n; ++k) out(a, b) += rho(k * m + a, k * m + b);
  return out;
}

// Density of a state on t.product() placed in C^N1 (x) C^N2.
inline Matrix lifted_density(const opalg::State& s, const opalg::TensorAlgebra& t) {
  const int n1 = t.left().ambient_dim();
  const int n2 = t.right().ambient_dim();
  Matrix big = Matrix::Zero(n1 * n2, n1 * n2);
  const auto& ld = t.left().block_dims();
  const auto& rd = t.right().block_dims();
  std::size_t b = 0;
  for (std::size_t i = 0; i < ld.size(); ++i) {
    for (std::size_t j = 0; j < rd.size(); ++j, ++b) {
      const double p = s.weights()[b];
      if (p <= 0.0) continue;
      const Matrix& rho = s.densities()[b];
      const int oi = t.left().block_offsets()[i];
      const int oj = t.right().block_offsets()[j];
      const int m = rd[j];
      for (int r = 0; r < rho.rows(); ++r)
        for (int c = 0; c < rho.cols(); ++c) {
          const int gr = (oi + r / m) * n2 + oj + r % m;
          const int gc = (oi + c / m) * n2 + oj + c % m;
          big(gr, gc) += p * rho(r, c);
        }
    }
  }
  return big;
}

inline Complex expectation(const opalg::State& s, const opalg::TensorAlgebra& t, const Matrix& x, const Matrix& y) {
  return (lifted_density(s, t) * opalg::kron(x, y)).trace();
}

inline double chsh(const opalg::State& s, const opalg::TensorAlgebra& t, const opalg::ChshObservables& o) {
  const Matrix bm = o.b.ambient() - o.b_prime.ambient();
  const Matrix bp = o.b.ambient() + o.b_prime.ambient();
  return std::abs(expectation(s, t, o.a.ambient(), bm)) + std::abs(expectation(s, t, o.a_prime.ambient(), bp));
}

// Largest eigenvalue of s1 A (x) (B - B') + s2 A' (x) (B + B') over sign choices,
// i.e. the best state for fixed observables.
inline double chsh_operator_max(const opalg::ChshObservables& o) {
  const Matrix bm = o.b.ambient() - o.b_prime.ambient();
  const Matrix bp = o.b.ambient() + o.b_prime.ambient();
  double best = 0.0;
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1}) {
      const Matrix op = double(s1) * opalg::kron(o.a.ambient(), bm) + double(s2) * opalg::kron(o.a_prime.ambient(), bp);
      Eigen::SelfAdjointEigenSolver<Matrix> es(op);
      best = std::max(best, es.eigenvalues().maxCoeff());
    }
  return best;
}

inline Matrix pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

inline Matrix random_unitary(int n, opalg::Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(opalg::random_gaussian(n, n, rng));
  return qr.householderQ();
}

// Random self-adjoint contraction in a canonical algebra.
inline opalg::AlgebraElement random_observable(const opalg::MatrixAlgebra& a, opalg::Rng& rng) {
  std::vector<Matrix> blocks;
  for (int n : a.block_dims()) blocks.push_back(opalg::random_hermitian(n, rng));
  opalg::AlgebraElement x = a.from_blocks(blocks);
  const double nrm = opalg::op_norm(x);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  return (u(rng) / nrm) * x;
}

// U diag(+-1) U^* blockwise: a self-adjoint unitary, on the unit sphere of
// the contractions.
inline opalg::AlgebraElement random_reflection(const opalg::MatrixAlgebra& a, opalg::Rng& rng) {
  std::vector<Matrix> blocks;
  std::bernoulli_distribution coin(0.5);
  for (int n : a.block_dims()) {
    const Matrix u = random_unitary(n, rng);
    opalg::Vector signs(n);
    for (int k = 0; k < n; ++k) signs(k) = coin(rng) ? 1.0 : -1.0;
    blocks.push_back(u * signs.asDiagonal() * u.adjoint());
  }
  return a.from_blocks(blocks);
}

}  // namespace oracle
