#include <doctest.h>

#include "oracles.hpp"

using namespace opalg;

namespace {

ChshObservables random_observables(const TensorAlgebra& t, Rng& rng) {
  return {oracle::random_observable(t.left(), rng), oracle::random_observable(t.left(), rng),
          oracle::random_observable(t.right(), rng), oracle::random_observable(t.right(), rng)};
}

State singlet(const TensorAlgebra& t) {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return vector_state(t, 0, v);
}

}  // namespace

TEST_CASE("chsh_value agrees with the lifted oracle") {
  Rng rng(1);
  const TensorAlgebra t(make_algebra({1, 2}), make_algebra({2, 1}));
  for (int k = 0; k < 50; ++k) {
    const State s = random_state(t.product(), rng());
    const ChshObservables o = random_observables(t, rng);
    CHECK(std::abs(chsh_value(s, t, o) - oracle::chsh(s, t, o)) < 1e-12);
  }
}

TEST_CASE("chsh examples") {
  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  const double r = 1.0 / std::sqrt(2.0);
  const Matrix x = oracle::pauli_x(), z = oracle::pauli_z();
  const ChshObservables opt{t.left().from_blocks({x}), t.left().from_blocks({z}),
                            t.right().from_blocks({Matrix(r * (z + x))}), t.right().from_blocks({Matrix(r * (z - x))})};
  CHECK(chsh_value(singlet(t), t, opt) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(oracle::chsh_operator_max(opt) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));

  const AlgebraElement zl = t.left().from_blocks({z});
  const AlgebraElement zr = t.right().from_blocks({z});
  Rng rng(3);
  for (int k = 0; k < 20; ++k) CHECK(chsh_value(random_state(t.product(), rng()), t, {zl, zl, zr, zr}) <= 2.0 + 1e-12);

  const ChshObservables zero{t.left().zero(), t.left().zero(), t.right().zero(), t.right().zero()};
  CHECK(chsh_value(singlet(t), t, zero) == 0.0);
}

TEST_CASE("observable contract") {
  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  Matrix shift = Matrix::Zero(2, 2);
  shift(0, 1) = 1.0;
  const AlgebraElement bad = t.left().from_blocks({shift});
  const AlgebraElement big = 2.0 * t.left().identity();
  const AlgebraElement id_r = t.right().identity();
  CHECK_THROWS_AS(chsh_value(singlet(t), t, {bad, t.left().identity(), id_r, id_r}), ContractViolation);
  CHECK_THROWS_AS(chsh_value(singlet(t), t, {big, t.left().identity(), id_r, id_r}), ContractViolation);
}

TEST_CASE("complex contractions break the product bound") {
  // Documents why only self-adjoint contractions are admitted: with B = 1 and
  // B' = i, a product state reaches 2 sqrt 2.
  const TensorAlgebra t(make_algebra({1}), make_algebra({1}));
  const State s = vector_state(t, 0, Vector::Ones(1));
  const Complex one(1.0), i(0.0, 1.0);
  CHECK(std::abs(one - i) + std::abs(one + i) == doctest::Approx(2.0 * std::sqrt(2.0)));
  const AlgebraElement a = t.left().identity();
  const AlgebraElement b = t.right().identity();
  const AlgebraElement bp = i * t.right().identity();
  CHECK_THROWS_AS(chsh_value(s, t, {a, a, b, bp}), ContractViolation);
}

TEST_CASE("sign exhaustion equals the absolute-value form") {
  Rng rng(8);
  const TensorAlgebra t(make_algebra({2}), make_algebra({1, 2}));
  for (int k = 0; k < 30; ++k) {
    const State s = random_state(t.product(), rng());
    const ChshObservables o = random_observables(t, rng);
    double best = -1e300;
    for (int s1 : {-1, 1})
      for (int s2 : {-1, 1}) best = std::max(best, evaluate(s, chsh_operator(t, o, {s1, s2})).real());
    CHECK(best == doctest::Approx(chsh_value(s, t, o)).epsilon(1e-12));
  }
}

TEST_CASE("convexity in the state") {
  Rng rng(13);
  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  for (int k = 0; k < 30; ++k) {
    const State a = random_state(t.product(), rng());
    const State b = random_state(t.product(), rng());
    const ChshObservables o = random_observables(t, rng);
    const double lam = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const State m = mix({{lam, a}, {1.0 - lam, b}});
    CHECK(chsh_value(m, t, o) <= lam * chsh_value(a, t, o) + (1.0 - lam) * chsh_value(b, t, o) + 1e-12);
  }
}

TEST_CASE("product-state bound on random inputs") {
  Rng rng(99);
  for (auto shape : {std::pair{2, 2}, std::pair{3, 2}}) {
    const TensorAlgebra t(make_algebra({shape.first}), make_algebra({shape.second}));
    for (int k = 0; k < 1000; ++k) {
      const State p = product_state(t, random_state(t.left(), rng()), random_state(t.right(), rng()));
      CHECK(chsh_value(p, t, random_observables(t, rng)) <= 2.0 + 1e-9);
    }
  }
}

TEST_CASE("see-saw over observables") {
  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  const ChshReport r = seesaw_observables(singlet(t), t, 5);
  CHECK(r.value >= 2.0 * std::sqrt(2.0) - 1e-6);
  CHECK(r.value == doctest::Approx(chsh_value(singlet(t), t, r.observables)).epsilon(1e-10));
  for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] >= r.history[k - 1] - 1e-12);

  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    const State p = product_state(t, random_state(t.left(), rng()), random_state(t.right(), rng()));
    CHECK(seesaw_observables(p, t, rng()).value <= 2.0 + 1e-9);
  }
  const TensorAlgebra c(make_algebra({1, 1}), make_algebra({2}));
  for (int k = 0; k < 10; ++k) {
    const ChshReport rc = seesaw_observables(random_state(c.product(), rng()), c, rng());
    CHECK(rc.value <= 2.0 + 1e-9);
    for (std::size_t i = 1; i < rc.history.size(); ++i) CHECK(rc.history[i] >= rc.history[i - 1] - 1e-12);
  }
}

TEST_CASE("global see-saw") {
  const double tsirelson = 2.0 * std::sqrt(2.0);
  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  const GlobalChshResult g = seesaw_global(t, 1);
  CHECK(g.report.value == doctest::Approx(tsirelson).epsilon(1e-6));
  CHECK(chsh_value(g.state, t, g.report.observables) == doctest::Approx(g.report.value).epsilon(1e-10));
  for (std::size_t k = 1; k < g.report.history.size(); ++k) CHECK(g.report.history[k] >= g.report.history[k - 1] - 1e-12);

  const TensorAlgebra mixed(make_algebra({1, 2}), make_algebra({2, 1}));
  CHECK(seesaw_global(mixed, 2).report.value == doctest::Approx(tsirelson).epsilon(1e-6));

  const TensorAlgebra comm(make_algebra({1, 1, 1}), make_algebra({3}));
  CHECK(seesaw_global(comm, 3).report.value <= 2.0 + 1e-7);
}

TEST_CASE("see-saw is deterministic in the seed") {
  const TensorAlgebra t(make_algebra({1, 2}), make_algebra({2}));
  const GlobalChshResult a = seesaw_global(t, 42);
  const GlobalChshResult b = seesaw_global(t, 42);
  CHECK(a.report.value == b.report.value);
  CHECK(a.report.history == b.report.history);
}
