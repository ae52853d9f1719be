#include "opalg/chsh.hpp"

#include <cmath>
#include <optional>

#include "opalg/errors.hpp"

namespace opalg {

namespace {

constexpr double kObservableTol = 1e-10;
constexpr double kZeroEigenvalue = 1e-12;
constexpr double kZeroGradient = 1e-14;

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

// Hermitian gradient g on the left factor with w(X (x) d) = tr(X g) for all X.
Matrix left_gradient(const State& state, const TensorAlgebra& t, const AlgebraElement& d) {
  const MatrixAlgebra& left = t.left();
  Matrix g = Matrix::Zero(left.ambient_dim(), left.ambient_dim());
  for (std::size_t b = 0; b < t.pair_index().size(); ++b) {
    const double p = state.weights()[b];
    if (p <= 0.0) continue;
    const auto [i, j] = t.pair_of(b);
    const int n = left.block_dims()[i];
    const int m = t.right().block_dims()[j];
    const Matrix lifted = kron(Matrix::Identity(n, n), d.block(j));
    const int off = left.block_offsets()[i];
    g.block(off, off, n, n) += p * partial_trace_right(lifted * state.densities()[b], n, m);
  }
  return hermitian_part(g);
}

// Hermitian gradient on the right factor with w(c (x) Y) = tr(Y g).
Matrix right_gradient(const State& state, const TensorAlgebra& t, const AlgebraElement& c) {
  const MatrixAlgebra& right = t.right();
  Matrix g = Matrix::Zero(right.ambient_dim(), right.ambient_dim());
  for (std::size_t b = 0; b < t.pair_index().size(); ++b) {
    const double p = state.weights()[b];
    if (p <= 0.0) continue;
    const auto [i, j] = t.pair_of(b);
    const int n = t.left().block_dims()[i];
    const int m = right.block_dims()[j];
    const Matrix lifted = kron(c.block(i), Matrix::Identity(m, m));
    const int off = right.block_offsets()[j];
    g.block(off, off, m, m) += p * partial_trace_left(lifted * state.densities()[b], n, m);
  }
  return hermitian_part(g);
}

// argmax of tr(X g) over self-adjoint contractions X of `algebra`; keeps
// `previous` when the gradient vanishes.
AlgebraElement best_response(const Matrix& g, const MatrixAlgebra& algebra, const AlgebraElement& previous) {
  const AlgebraElement projected = conditional_expectation(g, algebra);
  if (op_norm(projected) <= kZeroGradient) return previous;
  std::vector<Matrix> blocks;
  for (const Matrix& blk : projected.blocks()) blocks.push_back(hermitian_sign(blk, kZeroEigenvalue));
  return algebra.from_blocks(std::move(blocks));
}

AlgebraElement random_observable(const MatrixAlgebra& a, Rng& rng) {
  std::vector<Matrix> blocks;
  for (int n : a.block_dims()) blocks.push_back(random_hermitian(n, rng));
  AlgebraElement x = a.from_blocks(std::move(blocks));
  const double norm = op_norm(x);
  return norm > 0.0 ? (1.0 / norm) * x : x;
}

ChshObservables random_observables(const TensorAlgebra& t, Rng& rng) {
  auto a = random_observable(t.left(), rng);
  auto ap = random_observable(t.left(), rng);
  auto b = random_observable(t.right(), rng);
  auto bp = random_observable(t.right(), rng);
  return {std::move(a), std::move(ap), std::move(b), std::move(bp)};
}

std::array<int, 2> greedy_signs(const std::array<double, 2>& terms) {
  return {sign_of(terms[0]), sign_of(terms[1])};
}

// One sweep A, A', B, B' at fixed signs.
void sweep(const State& state, const TensorAlgebra& t, ChshObservables& obs, const std::array<int, 2>& s) {
  const double s1 = s[0];
  const double s2 = s[1];
  obs.a = best_response(left_gradient(state, t, s1 * (obs.b - obs.b_prime)), t.left(), obs.a);
  obs.a_prime = best_response(left_gradient(state, t, s2 * (obs.b + obs.b_prime)), t.left(), obs.a_prime);
  obs.b = best_response(right_gradient(state, t, s1 * obs.a + s2 * obs.a_prime), t.right(), obs.b);
  obs.b_prime = best_response(right_gradient(state, t, s2 * obs.a_prime - s1 * obs.a), t.right(), obs.b_prime);
}

State top_vector_state(const TensorAlgebra& t, const AlgebraElement& w) {
  std::size_t best_block = 0;
  EigenPair best{-1e300, Vector()};
  for (std::size_t b = 0; b < w.blocks().size(); ++b) {
    EigenPair e = top_eigenpair(w.block(b));
    if (e.value > best.value + 1e-14) {
      best = std::move(e);
      best_block = b;
    }
  }
  return vector_state(t, best_block, best.vector);
}

}  // namespace

void validate_observables(const ChshObservables& obs, const TensorAlgebra& t) {
  const std::array<const AlgebraElement*, 4> all{&obs.a, &obs.a_prime, &obs.b, &obs.b_prime};
  const std::array<const char*, 4> names{"A", "A'", "B", "B'"};
  for (std::size_t k = 0; k < 4; ++k) {
    const MatrixAlgebra& factor = k < 2 ? t.left() : t.right();
    if (!all[k]->owner().compatible(factor))
      throw ContractViolation(std::string(names[k]) + " does not belong to its factor");
    const AlgebraElement& x = *all[k];
    for (const Matrix& blk : x.blocks()) {
      if ((blk - blk.adjoint()).norm() > kObservableTol)
        throw ContractViolation(std::string(names[k]) + " is not self-adjoint");
    }
    if (op_norm(x) > 1.0 + kObservableTol) throw ContractViolation(std::string(names[k]) + " has norm above 1");
  }
}

std::array<double, 2> chsh_terms(const State& state, const TensorAlgebra& t, const ChshObservables& obs) {
  validate_observables(obs, t);
  const Complex first = evaluate(state, t.kron(obs.a, obs.b - obs.b_prime));
  const Complex second = evaluate(state, t.kron(obs.a_prime, obs.b + obs.b_prime));
  return {first.real(), second.real()};
}

double chsh_value(const State& state, const TensorAlgebra& t, const ChshObservables& obs) {
  const auto terms = chsh_terms(state, t, obs);
  return std::abs(terms[0]) + std::abs(terms[1]);
}

AlgebraElement chsh_operator(const TensorAlgebra& t, const ChshObservables& obs, std::array<int, 2> signs) {
  return double(signs[0]) * t.kron(obs.a, obs.b - obs.b_prime) +
         double(signs[1]) * t.kron(obs.a_prime, obs.b + obs.b_prime);
}

ChshReport seesaw_observables(const State& state, const TensorAlgebra& t, std::uint64_t seed,
                              const SeesawOptions& options) {
  if (!state.owner().compatible(t.product())) throw DomainError("state does not live on the tensor product");
  if (t.product().ambient_dim() > kMaxAmbientDim) throw InvalidPresentation("tensor product exceeds the ambient cap");
  std::optional<ChshReport> best;
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    ChshObservables obs = random_observables(t, rng);
    auto terms = chsh_terms(state, t, obs);
    auto signs = greedy_signs(terms);
    double value = std::abs(terms[0]) + std::abs(terms[1]);
    std::vector<double> history{value};
    bool converged = false;
    int iter = 0;
    while (iter < options.max_iter) {
      ++iter;
      sweep(state, t, obs, signs);
      terms = chsh_terms(state, t, obs);
      signs = greedy_signs(terms);
      const double next = std::abs(terms[0]) + std::abs(terms[1]);
      history.push_back(next);
      const double gain = next - value;
      value = next;
      if (gain < options.tol) {
        converged = true;
        break;
      }
    }
    if (!best || value > best->value) {
      best = ChshReport{std::move(obs), signs, value, iter, 0, converged, std::move(history)};
    }
  }
  if (!best) throw ContractViolation("see-saw needs at least one restart");
  best->restarts_used = options.restarts;
  return std::move(*best);
}

GlobalChshResult seesaw_global(const TensorAlgebra& t, std::uint64_t seed, const SeesawOptions& options) {
  if (t.product().ambient_dim() > kMaxAmbientDim) throw InvalidPresentation("tensor product exceeds the ambient cap");
  std::optional<GlobalChshResult> best;
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    ChshObservables obs = random_observables(t, rng);
    State state = random_pure_state(t.product(), rng());
    auto terms = chsh_terms(state, t, obs);
    auto signs = greedy_signs(terms);
    double value = std::abs(terms[0]) + std::abs(terms[1]);
    std::vector<double> history{value};
    bool converged = false;
    int iter = 0;
    while (iter < options.max_iter) {
      ++iter;
      sweep(state, t, obs, signs);
      signs = greedy_signs(chsh_terms(state, t, obs));
      state = top_vector_state(t, chsh_operator(t, obs, signs));
      terms = chsh_terms(state, t, obs);
      signs = greedy_signs(terms);
      const double next = std::abs(terms[0]) + std::abs(terms[1]);
      history.push_back(next);
      const double gain = next - value;
      value = next;
      if (gain < options.tol) {
        converged = true;
        break;
      }
    }
    if (!best || value > best->report.value) {
      best = GlobalChshResult{ChshReport{std::move(obs), signs, value, iter, 0, converged, std::move(history)},
                              std::move(state)};
    }
  }
  if (!best) throw ContractViolation("see-saw needs at least one restart");
  best->report.restarts_used = options.restarts;
  return std::move(*best);
}

}  // namespace opalg
