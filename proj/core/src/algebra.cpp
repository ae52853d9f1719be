#include "opalg/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "opalg/errors.hpp"

namespace opalg {

struct MatrixAlgebra::Impl {
  bool canonical = true;
  std::vector<int> dims;
  std::vector<int> offsets;
  int ambient = 0;
  std::vector<Matrix> basis;
  std::string label;
};

MatrixAlgebra::MatrixAlgebra(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

MatrixAlgebra MatrixAlgebra::canonical(std::vector<int> block_dims, std::string label) {
  if (block_dims.empty()) throw InvalidPresentation("block list is empty");
  auto impl = std::make_shared<Impl>();
  impl->canonical = true;
  impl->label = std::move(label);
  int offset = 0;
  for (int n : block_dims) {
    if (n < 1) throw InvalidPresentation("block dimension must be positive, got " + std::to_string(n));
    impl->offsets.push_back(offset);
    offset += n;
  }
  impl->ambient = offset;
  impl->dims = std::move(block_dims);
  for (std::size_t b = 0; b < impl->dims.size(); ++b) {
    const int n = impl->dims[b];
    const int off = impl->offsets[b];
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        Matrix e = Matrix::Zero(offset, offset);
        e(off + k, off + l) = 1.0;
        impl->basis.push_back(std::move(e));
      }
    }
  }
  return MatrixAlgebra(std::move(impl));
}

MatrixAlgebra MatrixAlgebra::subalgebra(int ambient_dim, const std::vector<Matrix>& spanning,
                                        std::string label, double tol) {
  if (ambient_dim < 1) throw InvalidPresentation("ambient dimension must be positive");
  for (const Matrix& m : spanning) {
    if (m.rows() != ambient_dim || m.cols() != ambient_dim)
      throw InvalidPresentation("spanning matrix does not match the ambient dimension");
  }
  // An orthonormal spanning set, as produced by the closures, is kept as is.
  const auto count = static_cast<Eigen::Index>(spanning.size());
  Matrix q(static_cast<Eigen::Index>(ambient_dim) * ambient_dim, count);
  for (Eigen::Index k = 0; k < count; ++k) {
    const Matrix& m = spanning[static_cast<std::size_t>(k)];
    q.col(k) = Eigen::Map<const Vector>(m.data(), m.size());
  }
  std::vector<Matrix> basis;
  if (count > 0 && (q.adjoint() * q - Matrix::Identity(count, count)).norm() <= 1e-12) {
    basis = spanning;
  } else {
    SpanBuilder span(ambient_dim, tol);
    span.add_all(spanning);
    basis = span.elements();
    q.resize(q.rows(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k)
      q.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Vector>(basis[k].data(), basis[k].size());
  }
  const Matrix id = Matrix::Identity(ambient_dim, ambient_dim);
  const Eigen::Map<const Vector> id_vec(id.data(), id.size());
  const double id_residual = q.cols() == 0 ? id.norm() : (id_vec - q * (q.adjoint() * id_vec)).norm();
  if (id_residual > tol * std::max(1.0, id.norm()))
    throw InvalidPresentation("subalgebra does not contain the identity");
  auto impl = std::make_shared<Impl>();
  impl->canonical = false;
  impl->ambient = ambient_dim;
  impl->basis = std::move(basis);
  impl->label = std::move(label);
  return MatrixAlgebra(std::move(impl));
}

bool MatrixAlgebra::is_canonical() const { return impl_->canonical; }
const std::vector<int>& MatrixAlgebra::block_dims() const { return impl_->dims; }
const std::vector<int>& MatrixAlgebra::block_offsets() const { return impl_->offsets; }

std::vector<int> MatrixAlgebra::storage_dims() const {
  return impl_->canonical ? impl_->dims : std::vector<int>{impl_->ambient};
}

int MatrixAlgebra::ambient_dim() const { return impl_->ambient; }
int MatrixAlgebra::linear_dim() const { return static_cast<int>(impl_->basis.size()); }
const std::vector<Matrix>& MatrixAlgebra::basis() const { return impl_->basis; }
const std::string& MatrixAlgebra::label() const { return impl_->label; }

bool MatrixAlgebra::compatible(const MatrixAlgebra& other) const {
  if (impl_ == other.impl_) return true;
  return impl_->canonical && other.impl_->canonical && impl_->dims == other.impl_->dims;
}

AlgebraElement MatrixAlgebra::identity() const {
  std::vector<Matrix> blocks;
  for (int n : storage_dims()) blocks.push_back(Matrix::Identity(n, n));
  return AlgebraElement(*this, std::move(blocks));
}

AlgebraElement MatrixAlgebra::zero() const {
  std::vector<Matrix> blocks;
  for (int n : storage_dims()) blocks.push_back(Matrix::Zero(n, n));
  return AlgebraElement(*this, std::move(blocks));
}

AlgebraElement MatrixAlgebra::basis_element(int k) const {
  return from_ambient(impl_->basis.at(static_cast<std::size_t>(k)), 1e-12);
}

AlgebraElement MatrixAlgebra::from_blocks(std::vector<Matrix> blocks) const {
  return AlgebraElement(*this, std::move(blocks));
}

AlgebraElement MatrixAlgebra::from_ambient(const Matrix& m, double tol) const {
  const int n = impl_->ambient;
  if (m.rows() != n || m.cols() != n) throw DomainError("ambient matrix has the wrong shape");
  const double scale = std::max(1.0, m.norm());
  if (impl_->canonical) {
    std::vector<Matrix> blocks;
    Matrix rest = m;
    for (std::size_t b = 0; b < impl_->dims.size(); ++b) {
      const int d = impl_->dims[b];
      const int off = impl_->offsets[b];
      blocks.push_back(m.block(off, off, d, d));
      rest.block(off, off, d, d).setZero();
    }
    if (rest.norm() > tol * scale) throw DomainError("matrix is not block diagonal for this algebra");
    return AlgebraElement(*this, std::move(blocks));
  }
  Matrix p = Matrix::Zero(n, n);
  for (const Matrix& b : impl_->basis) p += trace_inner(b, m) * b;
  if ((m - p).norm() > tol * scale) throw DomainError("matrix does not lie in the subalgebra");
  return AlgebraElement(*this, {m});
}

Vector MatrixAlgebra::coordinates(const Matrix& x) const {
  Vector c(linear_dim());
  for (int k = 0; k < linear_dim(); ++k) c(k) = trace_inner(impl_->basis[k], x);
  return c;
}

AlgebraElement::AlgebraElement(MatrixAlgebra owner, std::vector<Matrix> blocks)
    : owner_(std::move(owner)), blocks_(std::move(blocks)) {
  const std::vector<int> dims = owner_.storage_dims();
  if (dims.size() != blocks_.size()) throw DomainError("block count does not match the algebra");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (blocks_[i].rows() != dims[i] || blocks_[i].cols() != dims[i])
      throw DomainError("block " + std::to_string(i) + " has the wrong shape");
  }
}

Matrix AlgebraElement::ambient() const {
  if (!owner_.is_canonical()) return blocks_.front();
  const int n = owner_.ambient_dim();
  Matrix out = Matrix::Zero(n, n);
  const auto& offsets = owner_.block_offsets();
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    out.block(offsets[b], offsets[b], blocks_[b].rows(), blocks_[b].cols()) = blocks_[b];
  }
  return out;
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> out;
  out.reserve(blocks_.size());
  for (const Matrix& b : blocks_) out.push_back(b.adjoint());
  return AlgebraElement(owner_, std::move(out));
}

bool AlgebraElement::is_self_adjoint(double tol) const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [tol](const Matrix& b) { return (b - b.adjoint()).norm() <= tol; });
}

void AlgebraElement::require_compatible(const AlgebraElement& other) const {
  if (!owner_.compatible(other.owner_)) throw DomainError("elements belong to different algebras");
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (Matrix& b : blocks_) b *= s;
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }
AlgebraElement operator*(double s, AlgebraElement a) { return a *= Complex(s, 0.0); }

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  a.require_compatible(b);
  std::vector<Matrix> out;
  out.reserve(a.blocks_.size());
  for (std::size_t i = 0; i < a.blocks_.size(); ++i) out.push_back(a.blocks_[i] * b.blocks_[i]);
  return AlgebraElement(a.owner_, std::move(out));
}

MatrixAlgebra make_algebra(std::vector<int> block_dims, std::string label) {
  return MatrixAlgebra::canonical(std::move(block_dims), std::move(label));
}

double op_norm(const AlgebraElement& x) {
  double best = 0.0;
  for (const Matrix& b : x.blocks()) best = std::max(best, op_norm(b));
  return best;
}

bool is_commutative(const MatrixAlgebra& a, double tol) {
  if (a.is_canonical()) {
    return std::all_of(a.block_dims().begin(), a.block_dims().end(), [](int n) { return n == 1; });
  }
  const auto& basis = a.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      if ((basis[i] * basis[j] - basis[j] * basis[i]).norm() > tol) return false;
    }
  }
  return true;
}

namespace {

// Generator sets larger than this are closed with random probes instead of
// multiplying by every generator.
constexpr int kDeterministicGenerators = 16;
// Candidates screened per blocked projection.
constexpr std::size_t kBatch = 64;

}  // namespace

MatrixAlgebra generated_star_algebra(int ambient_dim, const std::vector<Matrix>& generators,
                                     double tol) {
  for (const Matrix& g : generators) {
    if (g.rows() != ambient_dim || g.cols() != ambient_dim)
      throw InvalidPresentation("generator does not match the ambient dimension");
  }
  std::vector<Matrix> both;
  both.reserve(2 * generators.size());
  for (const Matrix& g : generators) {
    both.push_back(g);
    both.push_back(g.adjoint());
  }
  SpanBuilder span(ambient_dim, tol);
  span.add(Matrix::Identity(ambient_dim, ambient_dim));
  span.add_all(both);
  // Orthonormal generators of the same algebra, identity left out.
  std::vector<Matrix> g = span.elements();
  g.erase(g.begin());

  std::vector<Matrix> pending;
  const auto flush = [&] {
    span.add_all(pending);
    pending.clear();
  };
  const auto queue = [&](Matrix m) {
    pending.push_back(std::move(m));
    if (pending.size() >= kBatch) flush();
  };

  if (static_cast<int>(g.size()) <= kDeterministicGenerators) {
    // V.g subset of V for every generator and V closed under adjoints.
    int frontier = 0;
    while (frontier < span.dim()) {
      const int end = span.dim();
      for (int k = frontier; k < end; ++k) {
        const Matrix v = span.element(k);
        for (const Matrix& h : g) queue(v * h);
        queue(v.adjoint());
      }
      flush();
      frontier = end;
    }
  } else {
    // V.r subset of V for a Gaussian combination r of the generators implies
    // V.g subset of V for all g with probability one. Likewise a Gaussian
    // element v of V with v.r and v^* in V certifies the whole pass, so the
    // full pass only runs when such a probe fails.
    Rng rng(derive_seed(0x6e6572617465ULL, static_cast<std::uint64_t>(ambient_dim)));
    const auto combine = [&](const std::vector<Matrix>& ms) {
      const Matrix coeffs = random_gaussian(static_cast<int>(ms.size()), 1, rng);
      Matrix out = Matrix::Zero(ambient_dim, ambient_dim);
      for (std::size_t k = 0; k < ms.size(); ++k) out += coeffs(static_cast<Eigen::Index>(k), 0) * ms[k];
      return out;
    };
    const auto inside = [&](const Matrix& x) { return span.residual(x) <= tol * std::max(1.0, x.norm()); };
    for (int pass = 0;; ++pass) {
      const int before = span.dim();
      const Matrix r = combine(g);
      const Matrix v = combine(span.elements());
      if (inside(v * r) && inside(v.adjoint())) break;
      for (int k = 0; k < before; ++k) {
        const Matrix e = span.element(k);
        queue(e * r);
        queue(e.adjoint());
      }
      flush();
      if (pass > ambient_dim * ambient_dim) throw NumericalFailure("closure did not stabilize");
    }
  }
  return MatrixAlgebra::subalgebra(ambient_dim, span.elements(), "generated", tol);
}

AlgebraElement conditional_expectation(const Matrix& x, const MatrixAlgebra& a) {
  if (x.rows() != a.ambient_dim() || x.cols() != a.ambient_dim())
    throw DomainError("matrix does not match the ambient dimension");
  if (a.is_canonical()) {
    std::vector<Matrix> blocks;
    for (std::size_t b = 0; b < a.block_dims().size(); ++b) {
      const int off = a.block_offsets()[b];
      const int n = a.block_dims()[b];
      blocks.push_back(x.block(off, off, n, n));
    }
    return a.from_blocks(std::move(blocks));
  }
  Matrix p = Matrix::Zero(a.ambient_dim(), a.ambient_dim());
  for (const Matrix& b : a.basis()) p += trace_inner(b, x) * b;
  return a.from_blocks({p});
}

bool same_span(const MatrixAlgebra& a, const MatrixAlgebra& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim() || a.linear_dim() != b.linear_dim()) return false;
  for (const Matrix& x : a.basis()) {
    if ((x - conditional_expectation(x, b).ambient()).norm() > tol) return false;
  }
  for (const Matrix& x : b.basis()) {
    if ((x - conditional_expectation(x, a).ambient()).norm() > tol) return false;
  }
  return true;
}

}  // namespace opalg
