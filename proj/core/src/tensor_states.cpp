#include "opalg/tensor_states.hpp"

#include <cmath>
#include <numeric>

#include "opalg/errors.hpp"

namespace opalg {

namespace {

void require_canonical(const MatrixAlgebra& a) {
  if (!a.is_canonical()) throw DomainError("states live on canonical algebras; canonicalize first");
}

Complex trace_product(const Matrix& rho, const Matrix& x) { return (rho.transpose().cwiseProduct(x)).sum(); }

}  // namespace

TensorAlgebra::TensorAlgebra(const MatrixAlgebra& left, const MatrixAlgebra& right)
    : left_(canonical_form(left)), right_(canonical_form(right)), product_(make_algebra({1})) {
  std::vector<int> dims;
  for (std::size_t i = 0; i < left_.block_dims().size(); ++i) {
    for (std::size_t j = 0; j < right_.block_dims().size(); ++j) {
      dims.push_back(left_.block_dims()[i] * right_.block_dims()[j]);
      pairs_.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  std::string label = left_.label().empty() && right_.label().empty() ? std::string()
                                                                       : left_.label() + "(x)" + right_.label();
  product_ = make_algebra(std::move(dims), std::move(label));
}

std::size_t TensorAlgebra::block_of(int i, int j) const {
  const int nr = static_cast<int>(right_.block_dims().size());
  if (i < 0 || j < 0 || i >= static_cast<int>(left_.block_dims().size()) || j >= nr)
    throw DomainError("factor block index out of range");
  return static_cast<std::size_t>(i * nr + j);
}

AlgebraElement TensorAlgebra::embed_left(const AlgebraElement& x) const {
  return kron(x, right_.identity());
}

AlgebraElement TensorAlgebra::embed_right(const AlgebraElement& y) const {
  return kron(left_.identity(), y);
}

AlgebraElement TensorAlgebra::kron(const AlgebraElement& x, const AlgebraElement& y) const {
  if (!x.owner().compatible(left_)) throw DomainError("left operand is not in the left factor");
  if (!y.owner().compatible(right_)) throw DomainError("right operand is not in the right factor");
  std::vector<Matrix> blocks;
  blocks.reserve(pairs_.size());
  for (const auto& [i, j] : pairs_) blocks.push_back(opalg::kron(x.block(i), y.block(j)));
  return product_.from_blocks(std::move(blocks));
}

TensorAlgebra tensor_product(const MatrixAlgebra& a1, const MatrixAlgebra& a2) { return TensorAlgebra(a1, a2); }

State::State(MatrixAlgebra owner, std::vector<double> weights, std::vector<Matrix> densities, double tol)
    : owner_(std::move(owner)), weights_(std::move(weights)), densities_(std::move(densities)) {
  require_canonical(owner_);
  const auto& dims = owner_.block_dims();
  if (weights_.size() != dims.size() || densities_.size() != dims.size())
    throw DomainError("state needs one weight and one density per block");
  double total = 0.0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    double& w = weights_[i];
    if (w < -tol) throw ContractViolation("negative block weight");
    if (w <= 0.0) {
      w = 0.0;
      densities_[i] = Matrix();
      continue;
    }
    total += w;
    const Matrix& rho = densities_[i];
    if (rho.rows() != dims[i] || rho.cols() != dims[i])
      throw DomainError("density " + std::to_string(i) + " has the wrong shape");
    if ((rho - rho.adjoint()).norm() > tol) throw ContractViolation("density is not self-adjoint");
    if (std::abs(rho.trace() - Complex(1.0)) > tol) throw ContractViolation("density does not have unit trace");
    if (hermitian_eigenvalues(rho).minCoeff() < -tol) throw ContractViolation("density is not positive");
  }
  if (std::abs(total - 1.0) > tol) throw ContractViolation("block weights do not sum to one");
}

Matrix State::ambient_density() const {
  const int n = owner_.ambient_dim();
  Matrix out = Matrix::Zero(n, n);
  const auto& dims = owner_.block_dims();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (weights_[i] <= 0.0) continue;
    const int off = owner_.block_offsets()[i];
    out.block(off, off, dims[i], dims[i]) = weights_[i] * densities_[i];
  }
  return out;
}

Complex evaluate(const State& state, const AlgebraElement& x) {
  if (!state.owner().compatible(x.owner())) throw DomainError("element does not belong to the state's algebra");
  Complex out = 0.0;
  for (std::size_t i = 0; i < state.weights().size(); ++i) {
    const double w = state.weights()[i];
    if (w > 0.0) out += w * trace_product(state.densities()[i], x.block(i));
  }
  return out;
}

State vector_state(const MatrixAlgebra& a, std::size_t block, const Vector& v, bool* renormalized) {
  require_canonical(a);
  const auto& dims = a.block_dims();
  if (block >= dims.size()) throw DomainError("block index out of range");
  if (v.size() != dims[block]) throw DomainError("vector does not match the block dimension");
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > 1e-6) throw ContractViolation("vector is not a unit vector");
  const bool fixed = norm != 1.0;
  if (renormalized) *renormalized = fixed;
  const Vector u = v / norm;
  std::vector<double> weights(dims.size(), 0.0);
  std::vector<Matrix> densities(dims.size());
  weights[block] = 1.0;
  densities[block] = u * u.adjoint();
  return State(a, std::move(weights), std::move(densities));
}

State vector_state(const TensorAlgebra& t, std::size_t block, const Vector& v, bool* renormalized) {
  return vector_state(t.product(), block, v, renormalized);
}

State state_from_density(const MatrixAlgebra& a, const Matrix& rho, double tol) {
  require_canonical(a);
  const auto& dims = a.block_dims();
  std::vector<double> weights(dims.size(), 0.0);
  std::vector<Matrix> densities(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int off = a.block_offsets()[i];
    Matrix b = hermitian_part(rho.block(off, off, dims[i], dims[i]));
    const double w = b.trace().real();
    if (w > tol) {
      weights[i] = w;
      densities[i] = b / w;
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-8) throw ContractViolation("density does not have unit trace");
  for (double& w : weights) w /= total;
  return State(a, std::move(weights), std::move(densities), std::max(tol, 1e-9));
}

State mix(const std::vector<std::pair<double, State>>& parts) {
  if (parts.empty()) throw DomainError("empty mixture");
  const MatrixAlgebra& a = parts.front().second.owner();
  Matrix rho = Matrix::Zero(a.ambient_dim(), a.ambient_dim());
  for (const auto& [w, s] : parts) {
    if (!s.owner().compatible(a)) throw DomainError("mixture of states on different algebras");
    rho += w * s.ambient_density();
  }
  return state_from_density(a, rho, 1e-12);
}

State product_state(const TensorAlgebra& t, const State& left, const State& right) {
  if (!left.owner().compatible(t.left()) || !right.owner().compatible(t.right()))
    throw DomainError("factor states do not match the tensor algebra");
  const auto& pairs = t.pair_index();
  std::vector<double> weights(pairs.size(), 0.0);
  std::vector<Matrix> densities(pairs.size());
  for (std::size_t b = 0; b < pairs.size(); ++b) {
    const auto [i, j] = pairs[b];
    const double w = left.weights()[i] * right.weights()[j];
    if (w <= 0.0) continue;
    weights[b] = w;
    densities[b] = kron(left.densities()[i], right.densities()[j]);
  }
  return State(t.product(), std::move(weights), std::move(densities));
}

State reduced_state(const State& state, const TensorAlgebra& t, Side side) {
  if (!state.owner().compatible(t.product())) throw DomainError("state does not live on the tensor product");
  const MatrixAlgebra& target = side == Side::left ? t.left() : t.right();
  const auto& dims = target.block_dims();
  std::vector<double> weights(dims.size(), 0.0);
  std::vector<Matrix> densities(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) densities[k] = Matrix::Zero(dims[k], dims[k]);
  const auto& pairs = t.pair_index();
  for (std::size_t b = 0; b < pairs.size(); ++b) {
    const double p = state.weights()[b];
    if (p <= 0.0) continue;
    const auto [i, j] = pairs[b];
    const int n = t.left().block_dims()[i];
    const int m = t.right().block_dims()[j];
    const Matrix& rho = state.densities()[b];
    if (side == Side::left) {
      weights[i] += p;
      densities[i] += p * partial_trace_right(rho, n, m);
    } else {
      weights[j] += p;
      densities[j] += p * partial_trace_left(rho, n, m);
    }
  }
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (weights[k] > 0.0) densities[k] = hermitian_part(densities[k] / weights[k]);
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return State(target, std::move(weights), std::move(densities), 1e-9);
}

bool is_pure(const State& state, double tol) {
  int carrying = 0;
  std::size_t block = 0;
  for (std::size_t i = 0; i < state.weights().size(); ++i) {
    if (state.weights()[i] >= 1.0 - tol) {
      ++carrying;
      block = i;
    }
  }
  if (carrying != 1) return false;
  const RealVector ev = hermitian_eigenvalues(state.densities()[block]);
  if (ev.size() < 2) return true;
  return ev(ev.size() - 2) <= tol;
}

bool is_product_state(const State& state, const TensorAlgebra& t, double tol) {
  const State left = reduced_state(state, t, Side::left);
  const State right = reduced_state(state, t, Side::right);
  const auto& ld = t.left().block_dims();
  const auto& rd = t.right().block_dims();
  // omega(e^{(i)}_{kl} (x) f^{(j)}_{st}) = p_ij rho_ij[(l,t),(k,s)].
  for (std::size_t i = 0; i < ld.size(); ++i) {
    for (std::size_t j = 0; j < rd.size(); ++j) {
      const int n = ld[i];
      const int m = rd[j];
      const std::size_t b = t.block_of(static_cast<int>(i), static_cast<int>(j));
      const double p = state.weights()[b];
      const double wl = left.weights()[i];
      const double wr = right.weights()[j];
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < m; ++s)
            for (int u = 0; u < m; ++u) {
              const Complex joint = p > 0.0 ? p * state.densities()[b](l * m + u, k * m + s) : Complex(0.0);
              const Complex ml = wl > 0.0 ? wl * left.densities()[i](l, k) : Complex(0.0);
              const Complex mr = wr > 0.0 ? wr * right.densities()[j](u, s) : Complex(0.0);
              if (std::abs(joint - ml * mr) > tol) return false;
            }
    }
  }
  return true;
}

State random_state(const MatrixAlgebra& a, std::uint64_t seed) {
  require_canonical(a);
  Rng rng(seed);
  const auto& dims = a.block_dims();
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> weights(dims.size());
  for (double& w : weights) w = expo(rng);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  std::vector<Matrix> densities;
  for (int n : dims) {
    const Matrix g = random_gaussian(n, n, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    densities.push_back(hermitian_part(rho));
  }
  return State(a, std::move(weights), std::move(densities));
}

State random_pure_state(const MatrixAlgebra& a, std::uint64_t seed) {
  require_canonical(a);
  Rng rng(seed);
  const auto& dims = a.block_dims();
  std::discrete_distribution<std::size_t> pick(dims.begin(), dims.end());
  const std::size_t block = pick(rng);
  return vector_state(a, block, random_unit_vector(dims[block], rng));
}

}  // namespace opalg
