#include "opalg/separability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <utility>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "opalg/errors.hpp"

namespace opalg {

namespace {

constexpr double kPptTol = 1e-10;
constexpr double kGapTol = 1e-15;
constexpr double kWeightFloor = 1e-14;
constexpr int kRefineSweeps = 20;
constexpr int kPolishEvaluations = 200;
constexpr int kPolishMaxParameters = 512;
constexpr double kMergeTol = 1e-6;

// Pure product state u (x) v on a product block.
struct Atom {
  std::size_t block = 0;
  Vector u;
  Vector v;
  Vector uv;
};

struct Candidate {
  Atom atom;
  double score = -std::numeric_limits<double>::infinity();
};

// Alternating top eigenvectors from a starting right factor v.
std::pair<Vector, Vector> alternate(const Matrix& d, int n, int m, Vector v, int iterations) {
  Vector u(n);
  double last = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < iterations; ++it) {
    // u: top eigenvector of (1 (x) v^*) d (1 (x) v)
    const Matrix lift_v = kron(Matrix::Identity(n, n), Matrix(v));
    u = top_eigenpair(lift_v.adjoint() * d * lift_v).vector;
    const Matrix lift_u = kron(Matrix(u), Matrix::Identity(m, m));
    const EigenPair ev = top_eigenpair(lift_u.adjoint() * d * lift_u);
    v = ev.vector;
    if (ev.value - last < 1e-14) break;
    last = ev.value;
  }
  return {std::move(u), std::move(v)};
}

// Alternating maximization of <u (x) v, d (u (x) v)> for a Hermitian block d
// on C^n (x) C^m.
Candidate best_product_vector(const Matrix& d, int n, int m, std::size_t block, Rng& rng, int restarts,
                              int iterations) {
  Candidate best;
  auto consider = [&](const Vector& u, const Vector& v) {
    Vector uv = kron(u, v);
    const double score = (uv.adjoint() * d * uv)(0, 0).real();
    if (score > best.score) best = {Atom{block, u, v, std::move(uv)}, score};
  };
  if (n == 1 || m == 1) {
    const EigenPair top = top_eigenpair(d);
    if (n == 1) consider(Vector::Ones(1), top.vector);
    else consider(top.vector, Vector::Ones(1));
    return best;
  }
  for (int r = 0; r < restarts; ++r) {
    auto [u, v] = alternate(d, n, m, random_unit_vector(m, rng), iterations);
    consider(u, v);
  }
  return best;
}

// Least-squares fit of a Hermitian block t by sum_k (a_k a_k^*) (x) (b_k b_k^*)
// over unnormalized a_k in C^n, b_k in C^m. Residuals are the packed upper
// triangle of the difference, padded with zeros up to the parameter count.
struct ProductFit : Eigen::DenseFunctor<double> {
  ProductFit(const Matrix& target, int n, int m, int atoms)
      : Eigen::DenseFunctor<double>(2 * atoms * (n + m), std::max<int>(static_cast<int>(target.rows() * target.rows()),
                                                                      2 * atoms * (n + m))),
        t(target), n(n), m(m), k(atoms) {}

  const Matrix& t;
  int n;
  int m;
  int k;

  int stride() const { return 2 * (n + m); }

  Vector left(const Eigen::VectorXd& x, int atom) const {
    const auto o = static_cast<Eigen::Index>(atom * stride());
    Vector a(n);
    for (int p = 0; p < n; ++p) a(p) = {x(o + p), x(o + n + p)};
    return a;
  }
  Vector right(const Eigen::VectorXd& x, int atom) const {
    const auto o = static_cast<Eigen::Index>(atom * stride() + 2 * n);
    Vector b(m);
    for (int q = 0; q < m; ++q) b(q) = {x(o + q), x(o + m + q)};
    return b;
  }

  void pack(const Matrix& d, Eigen::Ref<Eigen::VectorXd> out) const {
    out.setZero();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      out(r++) = d(i, i).real();
      for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
        out(r++) = std::sqrt(2.0) * d(i, j).real();
        out(r++) = std::sqrt(2.0) * d(i, j).imag();
      }
    }
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    Matrix d = t;
    for (int a = 0; a < k; ++a) {
      const Vector v = kron(left(x, a), right(x, a));
      d -= v * v.adjoint();
    }
    pack(d, f);
    return 0;
  }

  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
    jac.setZero();
    const Complex units[2] = {{1.0, 0.0}, {0.0, 1.0}};
    for (int a = 0; a < k; ++a) {
      const Vector u = left(x, a);
      const Vector w = right(x, a);
      const Vector v = kron(u, w);
      for (int part = 0; part < 2; ++part) {
        for (int p = 0; p < n; ++p) {
          Vector dv = Vector::Zero(n * m);
          dv.segment(p * m, m) = units[part] * w;
          pack(-(dv * v.adjoint() + v * dv.adjoint()), jac.col(a * stride() + part * n + p));
        }
        for (int q = 0; q < m; ++q) {
          Vector dv = Vector::Zero(n * m);
          for (int p = 0; p < n; ++p) dv(p * m + q) = units[part] * u(p);
          pack(-(dv * v.adjoint() + v * dv.adjoint()), jac.col(a * stride() + 2 * n + part * m + q));
        }
      }
    }
    return 0;
  }
};

class CorrectiveSolver {
 public:
  CorrectiveSolver(const State& target, const TensorAlgebra& t) : target_(target), t_(t) {
    for (std::size_t b = 0; b < t.pair_index().size(); ++b) {
      const double p = target.weights()[b];
      const int dim = t.product().block_dims()[b];
      blocks_.push_back(p > 0.0 ? Matrix(p * target.densities()[b]) : Matrix(Matrix::Zero(dim, dim)));
    }
  }

  // D = target - current mixture, blockwise.
  std::vector<Matrix> difference() const {
    std::vector<Matrix> d = blocks_;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      d[atoms_[k].block] -= weights_[k] * (atoms_[k].uv * atoms_[k].uv.adjoint());
    }
    return d;
  }

  double trace_residual() const {
    double r = 0.0;
    for (const Matrix& d : difference()) r += trace_norm_hermitian(d);
    return r;
  }

  Candidate oracle(const std::vector<Matrix>& d, Rng& rng, const DecompositionOptions& options) const {
    Candidate best;
    for (std::size_t b = 0; b < d.size(); ++b) {
      const auto [i, j] = t_.pair_of(b);
      Candidate c = best_product_vector(d[b], t_.left().block_dims()[i], t_.right().block_dims()[j], b, rng,
                                        options.inner_restarts, options.inner_iterations);
      if (c.score > best.score) best = std::move(c);
    }
    return best;
  }

  double mixture_score(const std::vector<Matrix>& d) const {
    double s = 0.0;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      const Atom& a = atoms_[k];
      s += weights_[k] * (a.uv.adjoint() * d[a.block] * a.uv)(0, 0).real();
    }
    return s;
  }

  void add(Atom atom) {
    atoms_.push_back(std::move(atom));
    weights_.push_back(atoms_.size() == 1 ? 1.0 : 0.0);
    minimize();
  }

  // Block coordinate sweeps: each atom is re-optimized against the target
  // minus the other atoms, then the weights are re-solved.
  void refine(int iterations) {
    for (int sweep = 0; sweep < kRefineSweeps; ++sweep) {
      bool moved = false;
      for (std::size_t k = 0; k < atoms_.size(); ++k) {
        const Atom& a = atoms_[k];
        Matrix d = blocks_[a.block];
        for (std::size_t l = 0; l < atoms_.size(); ++l) {
          if (l != k && atoms_[l].block == a.block) d -= weights_[l] * (atoms_[l].uv * atoms_[l].uv.adjoint());
        }
        const int n = static_cast<int>(a.u.size());
        const int m = static_cast<int>(a.v.size());
        Atom next{a.block, a.u, a.v, a.uv};
        if (n == 1 || m == 1) {
          const Vector top = top_eigenpair(d).vector;
          next.u = n == 1 ? Vector(Vector::Ones(1)) : top;
          next.v = n == 1 ? top : Vector(Vector::Ones(1));
        } else {
          std::tie(next.u, next.v) = alternate(d, n, m, a.v, iterations);
        }
        next.uv = kron(next.u, next.v);
        const double before = (a.uv.adjoint() * d * a.uv)(0, 0).real();
        const double after = (next.uv.adjoint() * d * next.uv)(0, 0).real();
        if (after > before + 1e-15) {
          atoms_[k] = std::move(next);
          moved = true;
        }
      }
      minimize();
      const bool merged = merge_close();
      if (!moved && !merged) break;
    }
  }

  // Folds atoms that have drifted onto one another into the heavier one.
  bool merge_close() {
    bool merged = false;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      for (std::size_t l = k + 1; l < atoms_.size();) {
        if (inner(atoms_[k], atoms_[l]) > 1.0 - kMergeTol) {
          if (weights_[l] > weights_[k]) std::swap(atoms_[k], atoms_[l]);
          weights_[k] += weights_[l];
          atoms_.erase(atoms_.begin() + static_cast<std::ptrdiff_t>(l));
          weights_.erase(weights_.begin() + static_cast<std::ptrdiff_t>(l));
          merged = true;
        } else {
          ++l;
        }
      }
    }
    if (merged) minimize();
    return merged;
  }

  // Joint Levenberg-Marquardt polish of all atoms, blockwise. Kept only when
  // it lowers the trace residual.
  void polish(int max_evaluations) {
    std::vector<Atom> atoms;
    std::vector<double> weights;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      std::vector<std::size_t> members;
      for (std::size_t k = 0; k < atoms_.size(); ++k) {
        if (atoms_[k].block == b) members.push_back(k);
      }
      if (members.empty()) continue;
      const int n = static_cast<int>(atoms_[members[0]].u.size());
      const int m = static_cast<int>(atoms_[members[0]].v.size());
      ProductFit fit(blocks_[b], n, m, static_cast<int>(members.size()));
      if (fit.inputs() > kPolishMaxParameters) return;
      Eigen::VectorXd x(fit.inputs());
      for (std::size_t r = 0; r < members.size(); ++r) {
        const Atom& a = atoms_[members[r]];
        const double scale = std::pow(weights_[members[r]], 0.25);
        const auto o = static_cast<Eigen::Index>(r) * fit.stride();
        x.segment(o, n) = scale * a.u.real();
        x.segment(o + n, n) = scale * a.u.imag();
        x.segment(o + 2 * n, m) = scale * a.v.real();
        x.segment(o + 2 * n + m, m) = scale * a.v.imag();
      }
      Eigen::LevenbergMarquardt<ProductFit> lm(fit);
      lm.setMaxfev(max_evaluations);
      lm.minimize(x);
      for (int r = 0; r < fit.k; ++r) {
        const Vector u = fit.left(x, r);
        const Vector v = fit.right(x, r);
        const double w = u.squaredNorm() * v.squaredNorm();
        if (!(w > kWeightFloor)) continue;
        Atom a{b, u.normalized(), v.normalized(), Vector()};
        a.uv = kron(a.u, a.v);
        atoms.push_back(std::move(a));
        weights.push_back(w);
      }
    }
    double total = 0.0;
    for (double w : weights) total += w;
    if (atoms.empty() || !(total > 0.0)) return;
    for (double& w : weights) w /= total;
    const double before = trace_residual();
    std::swap(atoms, atoms_);
    std::swap(weights, weights_);
    minimize();
    if (!(trace_residual() < before)) {
      atoms_ = std::move(atoms);
      weights_ = std::move(weights);
    }
  }

  std::size_t size() const { return atoms_.size(); }

  Decomposition decomposition() const {
    Decomposition out;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      const Atom& a = atoms_[k];
      const auto [i, j] = t_.pair_of(a.block);
      out.terms.push_back({weights_[k], vector_state(t_.left(), static_cast<std::size_t>(i), a.u),
                           vector_state(t_.right(), static_cast<std::size_t>(j), a.v)});
    }
    out.residual = remix_residual(out, target_, t_);
    return out;
  }

 private:
  double inner(const Atom& a, const Atom& b) const {
    if (a.block != b.block) return 0.0;
    return std::norm((a.uv.adjoint() * b.uv)(0, 0));
  }

  // Minimizer of |target - sum v_k a_k|_F on the affine hull of the atoms.
  Eigen::VectorXd affine_minimizer() const {
    const auto k = static_cast<Eigen::Index>(atoms_.size());
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd rhs(k + 1);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) sys(a, b) = inner(atoms_[a], atoms_[b]);
      sys(a, k) = 1.0;
      sys(k, a) = 1.0;
      const Atom& at = atoms_[a];
      rhs(a) = (at.uv.adjoint() * blocks_[at.block] * at.uv)(0, 0).real();
    }
    rhs(k) = 1.0;
    const Eigen::VectorXd sol = sys.completeOrthogonalDecomposition().solve(rhs);
    return sol.head(k);
  }

  // Wolfe's minor cycle: move towards the affine minimizer, dropping atoms
  // whose weight reaches zero, until the minimizer is strictly positive.
  void minimize() {
    for (std::size_t guard = 0; guard <= atoms_.size() + 1; ++guard) {
      const Eigen::VectorXd v = affine_minimizer();
      if (v.minCoeff() > kWeightFloor) {
        weights_.assign(v.data(), v.data() + v.size());
        return;
      }
      double theta = 1.0;
      for (std::size_t k = 0; k < atoms_.size(); ++k) {
        const double vk = v(static_cast<Eigen::Index>(k));
        if (vk < weights_[k]) theta = std::min(theta, weights_[k] / (weights_[k] - vk));
      }
      for (std::size_t k = 0; k < atoms_.size(); ++k) {
        weights_[k] += theta * (v(static_cast<Eigen::Index>(k)) - weights_[k]);
      }
      prune();
    }
    prune();
  }

  void prune() {
    std::vector<Atom> atoms;
    std::vector<double> weights;
    double total = 0.0;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      if (weights_[k] > kWeightFloor) {
        atoms.push_back(std::move(atoms_[k]));
        weights.push_back(weights_[k]);
        total += weights_[k];
      }
    }
    for (double& w : weights) w /= total;
    atoms_ = std::move(atoms);
    weights_ = std::move(weights);
  }

  const State& target_;
  const TensorAlgebra& t_;
  std::vector<Matrix> blocks_;
  std::vector<Atom> atoms_;
  std::vector<double> weights_;
};

}  // namespace

State remix(const Decomposition& d, const TensorAlgebra& t) {
  std::vector<std::pair<double, State>> parts;
  for (const ProductTerm& term : d.terms) parts.emplace_back(term.weight, product_state(t, term.left, term.right));
  return mix(parts);
}

double remix_residual(const Decomposition& d, const State& target, const TensorAlgebra& t) {
  Matrix diff = target.ambient_density();
  for (const ProductTerm& term : d.terms) diff -= term.weight * product_state(t, term.left, term.right).ambient_density();
  return trace_norm_hermitian(diff);
}

PptResult ppt_check(const State& state, const TensorAlgebra& t) {
  if (!state.owner().compatible(t.product())) throw DomainError("state does not live on the tensor product");
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < t.pair_index().size(); ++b) {
    const double p = state.weights()[b];
    if (p <= 0.0) continue;
    const auto [i, j] = t.pair_of(b);
    const Matrix pt = partial_transpose_right(p * state.densities()[b], t.left().block_dims()[i],
                                              t.right().block_dims()[j]);
    lowest = std::min(lowest, hermitian_eigenvalues(pt).minCoeff());
  }
  return {lowest >= -kPptTol, lowest};
}

DecompositionResult decompose_product_states(const State& state, const TensorAlgebra& t, std::uint64_t seed,
                                             const DecompositionOptions& options) {
  if (!state.owner().compatible(t.product())) throw DomainError("state does not live on the tensor product");
  if (t.product().ambient_dim() > kMaxAmbientDim) throw InvalidPresentation("tensor product exceeds the ambient cap");

  if (is_product_state(state, t, 1e-12)) {
    Decomposition d;
    d.terms.push_back({1.0, reduced_state(state, t, Side::left), reduced_state(state, t, Side::right)});
    d.residual = remix_residual(d, state, t);
    if (d.residual <= options.tol) return {true, std::move(d), 0};
  }

  Rng rng(seed);
  CorrectiveSolver solver(state, t);
  int iter = 0;
  for (; iter < options.max_terms; ++iter) {
    const std::vector<Matrix> diff = solver.difference();
    if (solver.size() > 0 && solver.trace_residual() <= options.tol) break;
    Candidate c = solver.oracle(diff, rng, options);
    if (solver.size() > 0 && c.score - solver.mixture_score(diff) <= kGapTol) break;
    solver.add(std::move(c.atom));
    solver.refine(options.inner_iterations);
    solver.polish(kPolishEvaluations);
  }
  Decomposition d = solver.decomposition();
  const bool ok = d.residual <= options.tol;
  return {ok, std::move(d), iter};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::decomposable:
      return "decomposable";
    case Verdict::not_decomposable:
      return "not_decomposable";
    case Verdict::undecided:
      return "undecided";
  }
  return "undecided";
}

Certificate certify_state(const State& state, const TensorAlgebra& t, std::uint64_t seed,
                          const CertifyBudgets& budgets) {
  Certificate cert;
  cert.ppt = ppt_check(state, t);
  if (!cert.ppt.passed) {
    cert.verdict = Verdict::not_decomposable;
    ChshReport report = seesaw_observables(state, t, derive_seed(seed, 1), budgets.seesaw);
    if (report.value > 2.0 + 1e-8) cert.chsh = std::move(report);
    return cert;
  }
  DecompositionResult result = decompose_product_states(state, t, derive_seed(seed, 2), budgets.decomposition);
  cert.best_residual = result.decomposition.residual;
  if (result.success) {
    cert.verdict = Verdict::decomposable;
    cert.decomposition = std::move(result.decomposition);
  } else {
    cert.verdict = Verdict::undecided;
  }
  return cert;
}

}  // namespace opalg
