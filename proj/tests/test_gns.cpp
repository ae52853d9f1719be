#include <doctest.h>

#include "oracles.hpp"

using namespace opalg;

namespace {

void check_fidelity(const State& s, const MatrixAlgebra& a, const Representation& pi) {
  REQUIRE(pi.cyclic_vector.has_value());
  const Vector& omega = *pi.cyclic_vector;
  CHECK(omega.norm() == doctest::Approx(1.0).epsilon(1e-9));
  for (int k = 0; k < a.linear_dim(); ++k) {
    const Complex lhs = evaluate(s, a.basis_element(k));
    const Complex rhs = (omega.adjoint() * pi.images[static_cast<std::size_t>(k)] * omega)(0, 0);
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

}  // namespace

TEST_CASE("GNS examples") {
  const MatrixAlgebra m2 = make_algebra({2});
  Vector v = Vector::Zero(2);
  v(0) = 1.0;
  const State pure = vector_state(m2, 0, v);
  const Representation pp = gns_construct(pure, m2);
  CHECK(pp.carrier_dim == 2);
  CHECK(is_irreducible(pp));
  check_fidelity(pure, m2, pp);

  const State trace(m2, {1.0}, {0.5 * Matrix::Identity(2, 2)});
  const Representation pt = gns_construct(trace, m2);
  CHECK(pt.carrier_dim == 4);
  CHECK(commutant(image_double_commutant(pt)).linear_dim() == 4);
  CHECK_FALSE(is_irreducible(pt));
  CHECK(image_double_commutant(pt).linear_dim() == 4);
  check_fidelity(trace, m2, pt);

  const MatrixAlgebra c2 = make_algebra({1, 1});
  const State point = vector_state(c2, 1, Vector::Ones(1));
  CHECK(gns_construct(point, c2).carrier_dim == 1);
}

TEST_CASE("representation invariants") {
  Rng rng(3);
  const MatrixAlgebra a = make_algebra({1, 2, 2});
  for (int k = 0; k < 10; ++k) {
    const State s = random_state(a, rng());
    const Representation pi = gns_construct(s, a);
    CHECK(representation_defect(pi) < 1e-9);
    check_fidelity(s, a, pi);
  }
  CHECK(representation_defect(identity_representation(a)) < 1e-12);
  for (const Representation& pi : irreducible_representations(a)) {
    CHECK(representation_defect(pi) < 1e-12);
    CHECK(is_irreducible(pi));
  }
}

TEST_CASE("image double commutants") {
  CHECK(image_double_commutant(identity_representation(make_algebra({2}))).linear_dim() == 4);
  CHECK(image_double_commutant(identity_representation(make_algebra({1, 1}))).linear_dim() == 2);
  CHECK(is_irreducible(Representation{make_algebra({1}), 1, {Matrix::Identity(1, 1)}, std::nullopt}));
}

TEST_CASE("purity matches irreducibility") {
  Rng rng(19);
  const std::vector<std::vector<int>> shapes{{2}, {1, 2}, {1, 1}, {3}, {2, 2}, {1, 1, 1}};
  for (int k = 0; k < 200; ++k) {
    const MatrixAlgebra a = make_algebra(shapes[static_cast<std::size_t>(k) % shapes.size()]);
    const State s = k % 2 == 0 ? random_pure_state(a, rng()) : random_state(a, rng());
    CHECK(is_pure(s) == is_irreducible(gns_construct(s, a)));
  }
}

TEST_CASE("tensor factorization") {
  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  CHECK(check_tensor_factorization(identity_representation(t.product()), t));
  CHECK(image_double_commutant(identity_representation(t.product())).linear_dim() == 16);

  Vector singlet = Vector::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  const Representation bell = gns_construct(vector_state(t, 0, singlet), t.product());
  CHECK(check_tensor_factorization(bell, t));
  CHECK(image_double_commutant(bell).linear_dim() == 16);

  const TensorAlgebra c(make_algebra({1, 1}), make_algebra({2}));
  const Representation mixed = gns_construct(random_state(c.product(), 4), c.product());
  CHECK(check_tensor_factorization(mixed, c));
}

TEST_CASE("separation in representations") {
  const TensorAlgebra c(make_algebra({1, 1}), make_algebra({2}));
  CHECK(separated_in_representation(identity_representation(c.product()), c));
  CHECK(separated_in_representation(gns_construct(random_state(c.product(), 8), c.product()), c));

  const TensorAlgebra t(make_algebra({2}), make_algebra({2}));
  CHECK_FALSE(separated_in_representation(identity_representation(t.product()), t));

  const TensorAlgebra d(make_algebra({1, 1}), make_algebra({1, 1}));
  for (const Representation& pi : irreducible_representations(d.product())) {
    CHECK(pi.carrier_dim == 1);
    CHECK(separated_in_representation(pi, d));
  }
}

TEST_CASE("CHSH is invariant under a faithful representation") {
  // Push the Bohm-Bell witness on ([1,2],[2]) through the GNS representation
  // of a faithful state and evaluate with the cyclic-vector state of the
  // image of the witness density.
  const TensorAlgebra t(make_algebra({1, 2}), make_algebra({2}));
  const SeparationVerdict v = is_separated(t.left(), t.right());
  REQUIRE(v.witness.has_value());
  const State& w = v.witness->state;
  const Representation pi = gns_construct(w, t.product());
  const ChshObservables& o = v.witness->observables;
  const Vector& omega = *pi.cyclic_vector;
  double value = 0.0;
  const Matrix a = pi.image(t.embed_left(o.a)), ap = pi.image(t.embed_left(o.a_prime));
  const Matrix bm = pi.image(t.embed_right(o.b - o.b_prime)), bp = pi.image(t.embed_right(o.b + o.b_prime));
  value += std::abs((omega.adjoint() * a * bm * omega)(0, 0));
  value += std::abs((omega.adjoint() * ap * bp * omega)(0, 0));
  CHECK(value == doctest::Approx(chsh_value(w, t, o)).epsilon(1e-9));
}
