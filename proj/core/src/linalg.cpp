#include "opalg/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace opalg {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix partial_trace_right(const Matrix& rho, int n, int m) {
  Matrix out = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < m; ++k) out(i, j) += rho(i * m + k, j * m + k);
  return out;
}

Matrix partial_trace_left(const Matrix& rho, int n, int m) {
  Matrix out = Matrix::Zero(m, m);
  for (int i = 0; i < n; ++i) out += rho.block(i * m, i * m, m, m);
  return out;
}

Matrix partial_transpose_right(const Matrix& rho, int n, int m) {
  Matrix out(n * m, n * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.block(i * m, j * m, m, m) = rho.block(i * m, j * m, m, m).transpose();
  return out;
}

Complex trace_inner(const Matrix& a, const Matrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

RealVector hermitian_eigenvalues(const Matrix& h) {
  if (h.size() == 0) return RealVector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double trace_norm_hermitian(const Matrix& h) {
  return hermitian_eigenvalues(h).cwiseAbs().sum();
}

Matrix hermitian_sign(const Matrix& h, double zero_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  RealVector s = es.eigenvalues();
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    s(k) = std::abs(s(k)) <= zero_tol ? 0.0 : (s(k) > 0 ? 1.0 : -1.0);
  }
  const Matrix& u = es.eigenvectors();
  return u * s.cast<Complex>().asDiagonal() * u.adjoint();
}

EigenPair top_eigenpair(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  const Eigen::Index last = es.eigenvalues().size() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

std::vector<SpectralCluster> spectral_clusters(const Matrix& h, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  const RealVector& ev = es.eigenvalues();
  std::vector<SpectralCluster> out;
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= ev.size(); ++k) {
    if (k == ev.size() || ev(k) - ev(k - 1) > tol) {
      SpectralCluster c;
      c.value = ev.segment(start, k - start).mean();
      c.basis = es.eigenvectors().middleCols(start, k - start);
      out.push_back(std::move(c));
      start = k;
    }
  }
  return out;
}

Matrix random_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(s * re, s * im);
    }
  return g;
}

Matrix random_hermitian(int n, Rng& rng) { return hermitian_part(random_gaussian(n, n, rng)); }

Vector random_unit_vector(int n, Rng& rng) {
  Vector v = random_gaussian(n, 1, rng).col(0);
  return v / v.norm();
}

SpanBuilder::SpanBuilder(int n, double tol) : n_(n), tol_(tol), columns_(n * n, 4) {}

bool SpanBuilder::add(const Matrix& candidate) {
  const Eigen::Map<const Vector> v(candidate.data(), candidate.size());
  const double norm = v.norm();
  if (norm <= tol_) return false;
  Vector r = v;
  for (int pass = 0; pass < 2 && dim_ > 0; ++pass) {
    const auto q = columns_.leftCols(dim_);
    r -= q * (q.adjoint() * r);
  }
  const double rn = r.norm();
  if (rn <= tol_ * std::max(1.0, norm)) return false;
  if (dim_ == columns_.cols()) columns_.conservativeResize(Eigen::NoChange, 2 * columns_.cols());
  columns_.col(dim_++) = r / rn;
  return true;
}

int SpanBuilder::add_all(const std::vector<Matrix>& candidates) {
  constexpr std::size_t kChunk = 64;
  int added = 0;
  for (std::size_t start = 0; start < candidates.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, candidates.size() - start);
    Matrix batch(static_cast<Eigen::Index>(n_) * n_, static_cast<Eigen::Index>(count));
    for (std::size_t k = 0; k < count; ++k) {
      const Matrix& c = candidates[start + k];
      batch.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Vector>(c.data(), c.size());
    }
    const Eigen::VectorXd norms = batch.colwise().norm().transpose();
    // Blocked projection against the current span, then Gram-Schmidt inside
    // the chunk; accepts exactly what add() would.
    const int old_dim = dim_;
    for (int pass = 0; pass < 2 && old_dim > 0; ++pass) {
      const auto q = columns_.leftCols(old_dim);
      batch -= q * (q.adjoint() * batch);
    }
    for (std::size_t k = 0; k < count; ++k) {
      const auto c = static_cast<Eigen::Index>(k);
      if (norms(c) <= tol_) continue;
      Vector r = batch.col(c);
      for (int pass = 0; pass < 2 && dim_ > old_dim; ++pass) {
        const auto q = columns_.middleCols(old_dim, dim_ - old_dim);
        r -= q * (q.adjoint() * r);
      }
      const double rn = r.norm();
      if (rn <= tol_ * std::max(1.0, norms(c))) continue;
      if (dim_ == columns_.cols()) columns_.conservativeResize(Eigen::NoChange, 2 * columns_.cols());
      columns_.col(dim_++) = r / rn;
      ++added;
    }
  }
  return added;
}

Matrix SpanBuilder::element(int k) const {
  return Eigen::Map<const Matrix>(columns_.col(k).data(), n_, n_);
}

std::vector<Matrix> SpanBuilder::elements() const {
  std::vector<Matrix> out;
  out.reserve(dim_);
  for (int k = 0; k < dim_; ++k) out.push_back(element(k));
  return out;
}

Matrix SpanBuilder::project(const Matrix& x) const {
  if (dim_ == 0) return Matrix::Zero(n_, n_);
  const Eigen::Map<const Vector> v(x.data(), x.size());
  const auto q = columns_.leftCols(dim_);
  Vector p = q * (q.adjoint() * v);
  return Eigen::Map<const Matrix>(p.data(), n_, n_);
}

double SpanBuilder::residual(const Matrix& x) const { return (x - project(x)).norm(); }

}  // namespace opalg
