#include "opalg/embeddings.hpp"

#include <algorithm>
#include <cmath>

#include "opalg/errors.hpp"

namespace opalg {

namespace {

constexpr double kPullbackTol = 1e-8;

struct CornerVectors {
  std::size_t block = 0;
  Vector first;   // local coordinates in the block
  Vector second;  // e21 applied to first
};

CornerVectors corner_vectors(const MatrixUnits& u) {
  const MatrixAlgebra& owner = u.e11.owner();
  if (!owner.is_canonical()) throw NumericalFailure("corner extraction needs a canonical algebra");
  const Matrix e11 = u.e11.ambient();
  Eigen::Index col = 0;
  e11.colwise().norm().maxCoeff(&col);
  const double norm = e11.col(col).norm();
  if (norm < 1e-6) throw NumericalFailure("corner extraction failed: e11 vanishes");
  const Vector first = e11.col(col) / norm;
  const Vector second = u.e21.ambient() * first;

  const auto& dims = owner.block_dims();
  const auto& offsets = owner.block_offsets();
  for (std::size_t b = 0; b < dims.size(); ++b) {
    if (col < offsets[b] || col >= offsets[b] + dims[b]) continue;
    const double outside = std::sqrt(std::max(0.0, first.squaredNorm() + second.squaredNorm() -
                                                       first.segment(offsets[b], dims[b]).squaredNorm() -
                                                       second.segment(offsets[b], dims[b]).squaredNorm()));
    if (outside > 1e-8) throw NumericalFailure("corner extraction failed: corner spans several blocks");
    return {b, first.segment(offsets[b], dims[b]), second.segment(offsets[b], dims[b])};
  }
  throw NumericalFailure("corner extraction failed");
}

}  // namespace

double matrix_unit_defect(const MatrixUnits& u) {
  const std::array<const AlgebraElement*, 4> e{&u.e11, &u.e12, &u.e21, &u.e22};
  double worst = 0.0;
  // e[2*(k)+(l)] = e_{k+1, l+1}
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) {
          const Matrix lhs = (*e[2 * k + l] * *e[2 * m + n]).ambient();
          const Matrix rhs = l == m ? e[2 * k + n]->ambient() : Matrix::Zero(lhs.rows(), lhs.cols());
          worst = std::max(worst, (lhs - rhs).norm());
        }
  worst = std::max(worst, (u.e12.adjoint().ambient() - u.e21.ambient()).norm());
  const Matrix p = (u.e11 + u.e22).ambient();
  worst = std::max(worst, (p - p.adjoint()).norm());
  return worst;
}

MatrixUnits embed_m2(const MatrixAlgebra& a, double tol) {
  if (is_commutative(a, tol)) throw NoEmbedding("commutative algebra contains no copy of M2");
  const WedderburnData w = wedderburn_decompose(a, tol);
  const auto it = std::find_if(w.block_dims.begin(), w.block_dims.end(), [](int n) { return n >= 2; });
  if (it == w.block_dims.end()) throw NoEmbedding("no block of size >= 2");
  const auto b = static_cast<std::size_t>(it - w.block_dims.begin());
  auto unit = [&](int k, int l) { return a.from_ambient(w.matrix_unit(b, k, l), kPullbackTol); };
  return {unit(0, 0), unit(0, 1), unit(1, 0), unit(1, 1)};
}

MatrixUnits two_projection_units(const AlgebraElement& p, const AlgebraElement& q, double tol) {
  if (!p.owner().compatible(q.owner())) throw DomainError("projections live in different algebras");
  const Matrix pm = p.ambient();
  const Matrix qm = q.ambient();
  for (const Matrix* m : {&pm, &qm}) {
    if ((*m - m->adjoint()).norm() > 1e-8 || (*m * *m - *m).norm() > 1e-8)
      throw ContractViolation("inputs must be self-adjoint idempotents");
  }
  if ((pm * qm - qm * pm).norm() <= tol) throw ContractViolation("projections commute");

  const auto clusters = spectral_clusters(pm * qm * pm, 1e-9);
  const auto generic = std::find_if(clusters.begin(), clusters.end(), [tol](const SpectralCluster& c) {
    return c.value > tol && c.value < 1.0 - tol;
  });
  if (generic == clusters.end()) {
    std::string spectrum;
    for (const auto& c : clusters) spectrum += " " + std::to_string(c.value);
    throw ContractViolation("PQP has no eigenvalue strictly between 0 and 1; spectrum:" + spectrum);
  }
  const double lambda = generic->value;
  const Eigen::Index n = pm.rows();
  const Matrix e11 = generic->basis * generic->basis.adjoint();
  const Matrix e21 = (qm - lambda * Matrix::Identity(n, n)) * e11 / std::sqrt(lambda * (1.0 - lambda));
  const Matrix e12 = e21.adjoint();
  const Matrix e22 = e21 * e12;

  const MatrixAlgebra generated = generated_star_algebra(static_cast<int>(n), {pm, qm});
  for (const Matrix* m : {&e11, &e12, &e21, &e22}) {
    if ((*m - conditional_expectation(*m, generated).ambient()).norm() > tol)
      throw NumericalFailure("constructed unit is not in the algebra generated by P and Q");
  }
  const MatrixAlgebra& owner = p.owner();
  return {owner.from_ambient(e11, kPullbackTol), owner.from_ambient(e12, kPullbackTol),
          owner.from_ambient(e21, kPullbackTol), owner.from_ambient(e22, kPullbackTol)};
}

ChshObservables tsirelson_observables(const MatrixUnits& left, const MatrixUnits& right) {
  const double r = 1.0 / std::sqrt(2.0);
  const AlgebraElement zl = left.e11 - left.e22;
  const AlgebraElement xl = left.e12 + left.e21;
  const AlgebraElement zr = right.e11 - right.e22;
  const AlgebraElement xr = right.e12 + right.e21;
  return {xl, zl, r * (zr + xr), r * (zr - xr)};
}

State bohm_bell_state(const TensorAlgebra& t, const MatrixUnits& left, const MatrixUnits& right) {
  if (!left.e11.owner().compatible(t.left()) || !right.e11.owner().compatible(t.right()))
    throw DomainError("matrix units do not live in the factors of the tensor algebra");
  const CornerVectors u = corner_vectors(left);
  const CornerVectors v = corner_vectors(right);
  const std::size_t block = t.block_of(static_cast<int>(u.block), static_cast<int>(v.block));
  const Vector psi = (kron(u.first, v.second) - kron(u.second, v.first)) / std::sqrt(2.0);
  return vector_state(t, block, psi / psi.norm());
}

SeparationVerdict is_separated(const MatrixAlgebra& a1, const MatrixAlgebra& a2, double tol) {
  if (is_commutative(a1, tol) || is_commutative(a2, tol)) return {true, std::nullopt};
  TensorAlgebra t(a1, a2);
  const MatrixUnits l = embed_m2(t.left(), tol);
  const MatrixUnits r = embed_m2(t.right(), tol);
  State state = bohm_bell_state(t, l, r);
  ChshObservables obs = tsirelson_observables(l, r);
  const double value = chsh_value(state, t, obs);
  return {false, SeparationWitness{std::move(t), std::move(state), std::move(obs), value}};
}

}  // namespace opalg
