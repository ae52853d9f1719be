#include <doctest.h>

#include "oracles.hpp"

using namespace opalg;

namespace {

const double kTsirelson = 2.0 * std::sqrt(2.0);

Matrix projector(const Vector& v) { return v * v.adjoint() / v.squaredNorm(); }

// Traces of all words of length <= 3 in the units.
std::vector<Complex> word_traces(const MatrixUnits& u) {
  const std::array<Matrix, 4> e{u.e11.ambient(), u.e12.ambient(), u.e21.ambient(), u.e22.ambient()};
  std::vector<Complex> out;
  for (int a = 0; a < 4; ++a) {
    out.push_back(e[a].trace());
    for (int b = 0; b < 4; ++b) {
      out.push_back((e[a] * e[b]).trace());
      for (int c = 0; c < 4; ++c) out.push_back((e[a] * e[b] * e[c]).trace());
    }
  }
  return out;
}

}  // namespace

TEST_CASE("embed_m2 examples") {
  const MatrixUnits m2 = embed_m2(make_algebra({2}));
  CHECK(matrix_unit_defect(m2) < 1e-12);
  Matrix e11 = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  CHECK((m2.e11.ambient() - e11).norm() < 1e-12);

  CHECK_THROWS_AS(embed_m2(make_algebra({1, 1, 1})), NoEmbedding);

  const MatrixUnits c3 = embed_m2(make_algebra({1, 3}));
  CHECK(matrix_unit_defect(c3) < 1e-9);
  CHECK(c3.e11.block(0).norm() < 1e-14);
}

TEST_CASE("embed_m2 on conjugated presentations") {
  Rng rng(6);
  const Matrix u = oracle::random_unitary(3, rng);
  std::vector<Matrix> span;
  const MatrixAlgebra canonical = make_algebra({1, 2});
  for (const Matrix& b : canonical.basis()) span.push_back(u * b * u.adjoint());
  const MatrixAlgebra a = MatrixAlgebra::subalgebra(3, span);
  const MatrixUnits m = embed_m2(a);
  CHECK(matrix_unit_defect(m) < 1e-9);
}

TEST_CASE("two-projection units") {
  const MatrixAlgebra m2 = make_algebra({2});
  Vector zero = Vector::Zero(2), plus = Vector::Ones(2);
  zero(0) = 1.0;
  const AlgebraElement p = m2.from_blocks({projector(zero)});
  const AlgebraElement q = m2.from_blocks({projector(plus)});
  const MatrixUnits u = two_projection_units(p, q);
  CHECK(matrix_unit_defect(u) < 1e-9);
  CHECK(((p * q * p).ambient() - 0.5 * p.ambient()).norm() < 1e-12);
  CHECK(generated_star_algebra(2, {u.e11.ambient(), u.e12.ambient()}).linear_dim() == 4);

  Matrix d1 = Matrix::Zero(2, 2), d2 = Matrix::Zero(2, 2);
  d1(0, 0) = 1.0;
  d2(1, 1) = 1.0;
  CHECK_THROWS_AS(two_projection_units(m2.from_blocks({d1}), m2.from_blocks({d2})), ContractViolation);

  Rng rng(12);
  const MatrixAlgebra m4 = make_algebra({4});
  for (int k = 0; k < 10; ++k) {
    const Matrix a = random_gaussian(4, 2, rng);
    const Matrix b = random_gaussian(4, 2, rng);
    const Matrix pa = a * (a.adjoint() * a).inverse() * a.adjoint();
    const Matrix pb = b * (b.adjoint() * b).inverse() * b.adjoint();
    const MatrixUnits r = two_projection_units(m4.from_blocks({pa}), m4.from_blocks({pb}));
    CHECK(matrix_unit_defect(r) < 1e-8);
  }
}

TEST_CASE("two-projection and corner units are equivalent") {
  const MatrixAlgebra m2 = make_algebra({2});
  const auto pq = find_noncommuting_projections(m2);
  REQUIRE(pq.has_value());
  const auto a = word_traces(two_projection_units(pq->first, pq->second));
  const auto b = word_traces(embed_m2(m2));
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-9);
}

TEST_CASE("tsirelson observables") {
  const MatrixUnits u = embed_m2(make_algebra({2}));
  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  const ChshObservables o = tsirelson_observables(u, u);
  for (const AlgebraElement* x : {&o.a, &o.a_prime, &o.b, &o.b_prime}) {
    CHECK(x->is_self_adjoint(1e-12));
    CHECK(op_norm(*x) == doctest::Approx(1.0));
  }
  const Matrix sum = (o.b * o.b + o.b_prime * o.b_prime).ambient();
  CHECK((sum - 2.0 * (u.e11 + u.e22).ambient()).norm() < 1e-12);
  CHECK(oracle::chsh_operator_max(o) == doctest::Approx(kTsirelson).epsilon(1e-12));
}

TEST_CASE("Bohm-Bell state reaches the Tsirelson value") {
  const std::vector<std::vector<int>> noncomm{{2}, {1, 2}, {2, 1}, {3}, {1, 3}, {2, 2}, {1, 1, 2}, {4}};
  for (const auto& l : noncomm)
    for (const auto& r : noncomm) {
      const TensorAlgebra t(make_algebra(l), make_algebra(r));
      if (t.left().ambient_dim() * t.right().ambient_dim() > 64) continue;
      const MatrixUnits ul = embed_m2(t.left());
      const MatrixUnits ur = embed_m2(t.right());
      const State s = bohm_bell_state(t, ul, ur);
      const ChshObservables o = tsirelson_observables(ul, ur);
      CHECK(std::abs(chsh_value(s, t, o) - kTsirelson) <= 1e-9);
      CHECK(std::abs(oracle::chsh(s, t, o) - kTsirelson) <= 1e-9);
      CHECK_FALSE(is_product_state(s, t));
      CHECK(is_pure(s));
    }
}

TEST_CASE("is_separated verdicts") {
  CHECK(is_separated(make_algebra({1, 1}), make_algebra({3})).separated);
  CHECK_FALSE(is_separated(make_algebra({1, 1}), make_algebra({3})).witness.has_value());

  const SeparationVerdict v = is_separated(make_algebra({2}), make_algebra({2}));
  CHECK_FALSE(v.separated);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->value == doctest::Approx(kTsirelson).epsilon(1e-12));

  const SeparationVerdict w = is_separated(make_algebra({1, 2}), make_algebra({2, 1}));
  REQUIRE(w.witness.has_value());
  // Support sits in the M_2 (x) M_2 product block, position (1, 0).
  const std::size_t block = w.witness->algebra.block_of(1, 0);
  CHECK(w.witness->state.weights()[block] == doctest::Approx(1.0));
  CHECK(w.witness->value == doctest::Approx(kTsirelson).epsilon(1e-12));
}

TEST_CASE("separated algebras have only product pure states") {
  const TensorAlgebra t(make_algebra({1, 1, 1}), make_algebra({1, 2}));
  for (std::uint64_t seed = 0; seed < 1000; ++seed) CHECK(is_product_state(random_pure_state(t.product(), seed), t));
}
