#include <doctest.h>

#include "oracles.hpp"

using namespace opalg;

namespace {

State singlet(const TensorAlgebra& t) {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return vector_state(t, 0, v);
}

State random_product(const TensorAlgebra& t, Rng& rng, bool pure) {
  const State l = pure ? random_pure_state(t.left(), rng()) : random_state(t.left(), rng());
  const State r = pure ? random_pure_state(t.right(), rng()) : random_state(t.right(), rng());
  return product_state(t, l, r);
}

// Direct partial transpose of the lifted singlet density.
double oracle_ppt_min(const State& s, const TensorAlgebra& t) {
  const Matrix big = oracle::lifted_density(s, t);
  const int n1 = t.left().ambient_dim(), n2 = t.right().ambient_dim();
  Matrix pt(big.rows(), big.cols());
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b)
      for (int k = 0; k < n2; ++k)
        for (int l = 0; l < n2; ++l) pt(a * n2 + k, b * n2 + l) = big(a * n2 + l, b * n2 + k);
  return hermitian_eigenvalues(pt).minCoeff();
}

}  // namespace

TEST_CASE("PPT examples") {
  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  const PptResult bell = ppt_check(singlet(t), t);
  CHECK_FALSE(bell.passed);
  CHECK(std::abs(bell.min_eigenvalue + 0.5) < 1e-10);
  CHECK(std::abs(oracle_ppt_min(singlet(t), t) + 0.5) < 1e-10);

  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    const PptResult p = ppt_check(random_product(t, rng, false), t);
    CHECK(p.passed);
    CHECK(p.min_eigenvalue >= -1e-12);
  }
  const State m = mix({{0.2, random_product(t, rng, false)},
                       {0.5, random_product(t, rng, true)},
                       {0.3, random_product(t, rng, false)}});
  CHECK(ppt_check(m, t).passed);
}

TEST_CASE("PPT is preserved by mixing") {
  Rng rng(14);
  const TensorAlgebra t(make_algebra({1, 2}), make_algebra({2}));
  std::vector<State> passing;
  while (passing.size() < 10) {
    State s = random_state(t.product(), rng());
    if (ppt_check(s, t).passed) passing.push_back(std::move(s));
  }
  for (int k = 0; k < 20; ++k) {
    const double lam = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const State m = mix({{lam, passing[rng() % 10]}, {1.0 - lam, passing[rng() % 10]}});
    CHECK(ppt_check(m, t).passed);
  }
}

TEST_CASE("product states decompose in one term") {
  Rng rng(5);
  const TensorAlgebra t(make_algebra({2}), make_algebra({1, 2}));
  for (int k = 0; k < 10; ++k) {
    const State p = random_product(t, rng, false);
    const DecompositionResult r = decompose_product_states(p, t, rng());
    CHECK(r.success);
    CHECK(r.decomposition.terms.size() == 1);
    CHECK(r.decomposition.residual <= 1e-10);
  }
}

TEST_CASE("known two-term mixture is recovered") {
  Rng rng(21);
  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  for (int k = 0; k < 5; ++k) {
    const State a = random_product(t, rng, true);
    const State b = random_product(t, rng, true);
    const State target = mix({{0.5, a}, {0.5, b}});
    const DecompositionResult r = decompose_product_states(target, t, rng());
    CHECK(r.success);
    CHECK(r.decomposition.terms.size() <= 4);
    CHECK(r.decomposition.residual <= 1e-6);
    CHECK(remix_residual(r.decomposition, target, t) <= r.decomposition.residual + 1e-12);
    const State back = remix(r.decomposition, t);
    CHECK((back.ambient_density() - target.ambient_density()).norm() <= 1e-6);
  }
}

TEST_CASE("Bell state does not decompose") {
  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  const DecompositionResult r = decompose_product_states(singlet(t), t, 3);
  CHECK_FALSE(r.success);
  CHECK(r.decomposition.residual >= 0.1);
  CHECK(remix_residual(r.decomposition, singlet(t), t) == doctest::Approx(r.decomposition.residual));
}

TEST_CASE("states with a commutative factor always decompose") {
  Rng rng(31);
  for (auto shape : {std::pair{std::vector<int>{1, 1}, std::vector<int>{2}},
                     std::pair{std::vector<int>{1, 1, 1}, std::vector<int>{3}}}) {
    const TensorAlgebra t(make_algebra(shape.first), make_algebra(shape.second));
    for (int k = 0; k < 100; ++k) {
      const State s = random_state(t.product(), rng());
      const DecompositionResult r = decompose_product_states(s, t, rng());
      CHECK(r.success);
      CHECK(r.decomposition.residual <= 1e-6);
      double total = 0.0;
      for (const ProductTerm& term : r.decomposition.terms) {
        CHECK(term.weight > 0.0);
        total += term.weight;
      }
      CHECK(std::abs(total - 1.0) <= 1e-10);
      CHECK(remix_residual(r.decomposition, s, t) <= r.decomposition.residual + 1e-12);
    }
  }
}

TEST_CASE("certificates") {
  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  const Certificate bell = certify_state(singlet(t), t, 1);
  CHECK(bell.verdict == Verdict::not_decomposable);
  CHECK(std::abs(bell.ppt.min_eigenvalue + 0.5) < 1e-10);
  REQUIRE(bell.chsh.has_value());
  CHECK(bell.chsh->value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-6));

  Rng rng(8);
  const Certificate prod = certify_state(random_product(t, rng, false), t, 2);
  CHECK(prod.verdict == Verdict::decomposable);
  REQUIRE(prod.decomposition.has_value());
  CHECK(prod.decomposition->terms.size() == 1);

  const TensorAlgebra c(make_algebra({1, 1}), make_algebra({2}));
  CHECK(certify_state(random_state(c.product(), 77), c, 3).verdict == Verdict::decomposable);
  CHECK(std::string(to_string(Verdict::undecided)) == "undecided");
}

TEST_CASE("CHSH violation implies decomposition failure") {
  Rng rng(44);
  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  int violations = 0;
  for (int k = 0; k < 30; ++k) {
    // Noisy singlets: the violating ones must not decompose.
    const double p = std::uniform_real_distribution<double>(0.5, 1.0)(rng);
    const State s = mix({{p, singlet(t)}, {1.0 - p, State(t.product(), {1.0}, {0.25 * Matrix::Identity(4, 4)})}});
    const ChshReport r = seesaw_observables(s, t, rng());
    if (r.value > 2.0 + 1e-8) {
      ++violations;
      CHECK_FALSE(decompose_product_states(s, t, rng()).success);
    }
  }
  CHECK(violations > 0);
}
