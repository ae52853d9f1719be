#include <algorithm>
#include <cmath>
#include <numeric>

#include "opalg/algebra.hpp"
#include "opalg/errors.hpp"

namespace opalg {

namespace {

constexpr double kClusterTol = 1e-7;
constexpr double kPullbackTol = 1e-8;

Matrix random_combination(const std::vector<Matrix>& basis, int n, Rng& rng) {
  const Matrix c = random_gaussian(static_cast<int>(basis.size()), 1, rng);
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < basis.size(); ++k) out += c(static_cast<Eigen::Index>(k), 0) * basis[k];
  return out;
}

Matrix random_self_adjoint(const std::vector<Matrix>& basis, int n, Rng& rng) {
  return hermitian_part(random_combination(basis, n, rng));
}

double span_residual(const std::vector<Matrix>& orthonormal, const Matrix& x) {
  Matrix r = x;
  for (const Matrix& b : orthonormal) r -= trace_inner(b, x) * b;
  return r.norm();
}

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

// Orthonormal basis of the right null space of c, threshold relative to the
// largest singular value.
Matrix null_space(const Matrix& c, double tol) {
  if (c.cols() == 0) return Matrix(0, 0);
  Eigen::BDCSVD<Matrix> svd(c, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double thr = std::max(tol, 1e-10) * std::max(1.0, smax);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > thr) ++rank;
  return svd.matrixV().rightCols(c.cols() - rank);
}

void check_closed(const MatrixAlgebra& a, double tol) {
  const int n = a.ambient_dim();
  const auto& basis = a.basis();
  Rng rng(derive_seed(0x636c6f736564ULL, static_cast<std::uint64_t>(basis.size())));
  for (int probe = 0; probe < 2; ++probe) {
    Matrix r = random_combination(basis, n, rng);
    r /= r.norm();
    for (const Matrix& b : basis) {
      const Matrix p = b * r;
      if (span_residual(basis, p) > tol * std::max(1.0, p.norm()))
        throw InvalidPresentation("basis is not closed under multiplication");
    }
  }
  for (const Matrix& b : basis) {
    if (span_residual(basis, b.adjoint()) > tol) throw InvalidPresentation("basis is not closed under adjoints");
  }
}

WedderburnData canonical_wedderburn(const MatrixAlgebra& a) {
  const auto& dims = a.block_dims();
  std::vector<std::size_t> order(dims.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return dims[x] > dims[y]; });

  WedderburnData w;
  const int n = a.ambient_dim();
  w.change_of_basis = Matrix::Zero(n, n);
  int col = 0;
  for (std::size_t b : order) {
    w.block_dims.push_back(dims[b]);
    w.multiplicities.push_back(1);
    std::vector<Matrix> blocks;
    for (std::size_t c = 0; c < dims.size(); ++c) {
      blocks.push_back(c == b ? Matrix(Matrix::Identity(dims[c], dims[c])) : Matrix(Matrix::Zero(dims[c], dims[c])));
    }
    w.central_projections.push_back(a.from_blocks(std::move(blocks)));
    for (int j = 0; j < dims[b]; ++j) w.change_of_basis(a.block_offsets()[b] + j, col++) = 1.0;
  }
  return w;
}

struct Summand {
  int n = 0;
  int m = 0;
  Matrix projection;
  Matrix columns;  // ambient x (n*m), ordered (unit index, multiplicity index)
};

// One attempt at splitting a closed algebra; empty on a degenerate draw.
std::optional<std::vector<Summand>> split_summands(const MatrixAlgebra& a, const std::vector<Matrix>& z_basis,
                                                   Rng& rng) {
  const int n = a.ambient_dim();
  const Matrix z = random_self_adjoint(z_basis, n, rng);
  const auto clusters = spectral_clusters(z, kClusterTol * std::max(1.0, op_norm(z)));
  if (clusters.size() != z_basis.size()) return std::nullopt;

  std::vector<Summand> out;
  for (const SpectralCluster& cl : clusters) {
    const Matrix& v = cl.basis;
    const int r = static_cast<int>(v.cols());
    SpanBuilder local(r, 1e-9);
    for (const Matrix& b : a.basis()) local.add(v.adjoint() * b * v);
    const int d = local.dim();
    const int nk = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
    if (nk * nk != d || r % nk != 0) return std::nullopt;
    const int mk = r / nk;
    const std::vector<Matrix> local_basis = local.elements();

    const Matrix h = random_self_adjoint(local_basis, r, rng);
    const auto units = spectral_clusters(h, kClusterTol * std::max(1.0, op_norm(h)));
    if (static_cast<int>(units.size()) != nk) return std::nullopt;
    for (const auto& u : units) {
      if (u.basis.cols() != mk) return std::nullopt;
    }

    const Matrix x = random_combination(local_basis, r, rng);
    Matrix cols(r, r);
    const Matrix& first = units.front().basis;
    for (int j = 0; j < nk; ++j) {
      if (j == 0) {
        cols.middleCols(0, mk) = first;
        continue;
      }
      const Matrix& bj = units[static_cast<std::size_t>(j)].basis;
      const Matrix mj = bj.adjoint() * x * first;
      const double s = std::sqrt((mj * mj.adjoint()).trace().real() / mk);
      if (s < 1e-6) return std::nullopt;
      cols.middleCols(j * mk, mk) = bj * mj / s;
    }
    Summand sm;
    sm.n = nk;
    sm.m = mk;
    sm.projection = v * v.adjoint();
    sm.columns = v * cols;
    out.push_back(std::move(sm));
  }
  return out;
}

bool verify_block_form(const MatrixAlgebra& a, const WedderburnData& w) {
  const Matrix& u = w.change_of_basis;
  const int n = a.ambient_dim();
  if ((u.adjoint() * u - Matrix::Identity(n, n)).norm() > 1e-8) return false;
  for (const Matrix& b : a.basis()) {
    const Matrix c = u.adjoint() * b * u;
    Matrix expected = Matrix::Zero(n, n);
    int off = 0;
    for (std::size_t k = 0; k < w.block_dims.size(); ++k) {
      const int nk = w.block_dims[k];
      const int mk = w.multiplicities[k];
      Matrix small = Matrix::Zero(nk, nk);
      for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j)
          for (int s = 0; s < mk; ++s) small(i, j) += c(off + i * mk + s, off + j * mk + s) / double(mk);
      expected.block(off, off, nk * mk, nk * mk) = kron(small, Matrix::Identity(mk, mk));
      off += nk * mk;
    }
    if ((c - expected).norm() > 1e-7) return false;
  }
  return true;
}

}  // namespace

Matrix WedderburnData::matrix_unit(std::size_t block, int k, int l) const {
  int off = 0;
  for (std::size_t b = 0; b < block; ++b) off += block_dims[b] * multiplicities[b];
  const int m = multiplicities.at(block);
  const int n = block_dims.at(block);
  if (k < 0 || l < 0 || k >= n || l >= n) throw DomainError("matrix unit index out of range");
  const Eigen::Index dim = change_of_basis.rows();
  Matrix out = Matrix::Zero(dim, dim);
  for (int s = 0; s < m; ++s) {
    out += change_of_basis.col(off + k * m + s) * change_of_basis.col(off + l * m + s).adjoint();
  }
  return out;
}

std::vector<Matrix> center(const MatrixAlgebra& a, double tol) {
  const int n = a.ambient_dim();
  const auto& basis = a.basis();
  Rng rng(derive_seed(0x63656e746572ULL, static_cast<std::uint64_t>(basis.size())));
  const Matrix h1 = random_self_adjoint(basis, n, rng);
  const Matrix h2 = random_self_adjoint(basis, n, rng);
  Matrix c(2 * n * n, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Matrix& b = basis[k];
    c.col(static_cast<Eigen::Index>(k)) << vec(b * h1 - h1 * b), vec(b * h2 - h2 * b);
  }
  const Matrix null = null_space(c, tol);
  std::vector<Matrix> out;
  for (Eigen::Index j = 0; j < null.cols(); ++j) {
    Matrix z = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < basis.size(); ++k) z += null(static_cast<Eigen::Index>(k), j) * basis[k];
    out.push_back(std::move(z));
  }
  return out;
}

MatrixAlgebra commutant(const MatrixAlgebra& a, double tol) {
  const int n = a.ambient_dim();
  // Two generic self-adjoint elements generate a finite-dimensional
  // C*-algebra, so their joint commutant is the commutant of `a`.
  Rng rng(derive_seed(0x636f6d6d7574ULL, static_cast<std::uint64_t>(a.linear_dim())));
  const Matrix h1 = random_self_adjoint(a.basis(), n, rng);
  const Matrix h2 = random_self_adjoint(a.basis(), n, rng);

  // Unknowns: X = U X' U^* with X' block diagonal over eigenvalue clusters of h1.
  const auto clusters = spectral_clusters(h1, kClusterTol * std::max(1.0, op_norm(h1)));
  Matrix u(n, n);
  std::vector<std::pair<int, int>> ranges;
  int off = 0;
  for (const auto& cl : clusters) {
    const int c = static_cast<int>(cl.basis.cols());
    u.middleCols(off, c) = cl.basis;
    ranges.emplace_back(off, c);
    off += c;
  }
  const Matrix g1 = u.adjoint() * h1 * u;
  const Matrix g2 = u.adjoint() * h2 * u;

  std::vector<std::pair<int, int>> unknowns;
  for (const auto& [start, size] : ranges)
    for (int p = 0; p < size; ++p)
      for (int q = 0; q < size; ++q) unknowns.emplace_back(start + p, start + q);

  Matrix c(2 * n * n, static_cast<Eigen::Index>(unknowns.size()));
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    const auto [p, q] = unknowns[k];
    Matrix d1 = Matrix::Zero(n, n);
    Matrix d2 = Matrix::Zero(n, n);
    // e_pq g - g e_pq
    d1.row(p) += g1.row(q);
    d1.col(q) -= g1.col(p);
    d2.row(p) += g2.row(q);
    d2.col(q) -= g2.col(p);
    c.col(static_cast<Eigen::Index>(k)) << vec(d1), vec(d2);
  }
  const Matrix null = null_space(c, tol);
  std::vector<Matrix> elements;
  for (Eigen::Index j = 0; j < null.cols(); ++j) {
    Matrix x = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < unknowns.size(); ++k) {
      x(unknowns[k].first, unknowns[k].second) = null(static_cast<Eigen::Index>(k), j);
    }
    elements.push_back(u * x * u.adjoint());
  }
  return MatrixAlgebra::subalgebra(n, elements, "commutant", tol);
}

WedderburnData wedderburn_decompose(const MatrixAlgebra& a, double tol, std::uint64_t seed, int max_retries) {
  if (a.is_canonical()) return canonical_wedderburn(a);
  if (a.ambient_dim() > kMaxAmbientDim) {
    throw InvalidPresentation("ambient dimension " + std::to_string(a.ambient_dim()) + " exceeds the cap of " +
                              std::to_string(kMaxAmbientDim));
  }
  check_closed(a, tol);
  const std::vector<Matrix> z_basis = center(a, tol);
  const int n = a.ambient_dim();

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    auto summands = split_summands(a, z_basis, rng);
    if (!summands) continue;
    // Equal sizes keep the order of first occurrence along the ambient basis,
    // independent of the random central element.
    const auto first_index = [](const Summand& s) {
      Eigen::Index k = 0;
      while (k + 1 < s.projection.rows() && s.projection(k, k).real() <= 1e-8) ++k;
      return std::pair<Eigen::Index, double>(k, -s.projection(k, k).real());
    };
    std::sort(summands->begin(), summands->end(),
              [&](const Summand& x, const Summand& y) { return first_index(x) < first_index(y); });
    std::stable_sort(summands->begin(), summands->end(),
                     [](const Summand& x, const Summand& y) { return x.n > y.n; });
    WedderburnData w;
    w.change_of_basis = Matrix(n, n);
    int col = 0;
    for (const Summand& s : *summands) {
      w.block_dims.push_back(s.n);
      w.multiplicities.push_back(s.m);
      w.central_projections.push_back(a.from_ambient(s.projection, kPullbackTol));
      w.change_of_basis.middleCols(col, s.n * s.m) = s.columns;
      col += s.n * s.m;
    }
    if (col != n) throw InvalidPresentation("algebra is not unital on its ambient space");
    if (verify_block_form(a, w)) return w;
  }
  throw NumericalFailure("Wedderburn decomposition failed after " + std::to_string(max_retries) + " attempts");
}

MatrixAlgebra canonical_form(const MatrixAlgebra& a, double tol) {
  if (a.is_canonical()) return a;
  return make_algebra(wedderburn_decompose(a, tol).block_dims, a.label());
}

std::optional<std::pair<AlgebraElement, AlgebraElement>> find_noncommuting_projections(const MatrixAlgebra& a,
                                                                                       double tol) {
  if (is_commutative(a, tol)) return std::nullopt;
  const WedderburnData w = wedderburn_decompose(a, tol);
  const auto it = std::find_if(w.block_dims.begin(), w.block_dims.end(), [](int n) { return n >= 2; });
  if (it == w.block_dims.end()) return std::nullopt;
  const auto b = static_cast<std::size_t>(it - w.block_dims.begin());
  const Matrix p = w.matrix_unit(b, 0, 0);
  const Matrix q = 0.5 * (w.matrix_unit(b, 0, 0) + w.matrix_unit(b, 0, 1) + w.matrix_unit(b, 1, 0) +
                          w.matrix_unit(b, 1, 1));
  return std::make_pair(a.from_ambient(p, kPullbackTol), a.from_ambient(q, kPullbackTol));
}

}  // namespace opalg
