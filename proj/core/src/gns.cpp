#include "opalg/gns.hpp"

#include <algorithm>
#include <cmath>

#include "opalg/errors.hpp"

namespace opalg {

namespace {

// n^2 x d matrix whose columns are vec(m_k).
Matrix stack(const std::vector<Matrix>& ms, int n) {
  Matrix out(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(ms.size()));
  for (std::size_t k = 0; k < ms.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Vector>(ms[k].data(), ms[k].size());
  }
  return out;
}

}  // namespace

Matrix Representation::image_of_ambient(const Matrix& x) const {
  const Vector c = source.coordinates(x);
  Matrix out = Matrix::Zero(carrier_dim, carrier_dim);
  for (std::size_t k = 0; k < images.size(); ++k) out += c(static_cast<Eigen::Index>(k)) * images[k];
  return out;
}

Matrix Representation::image(const AlgebraElement& x) const {
  if (!x.owner().compatible(source)) throw DomainError("element does not belong to the represented algebra");
  return image_of_ambient(x.ambient());
}

double representation_defect(const Representation& pi) {
  const auto& basis = pi.source.basis();
  double worst = 0.0;
  const int n = pi.source.ambient_dim();
  worst = std::max(worst, (pi.image_of_ambient(Matrix::Identity(n, n)) -
                           Matrix::Identity(pi.carrier_dim, pi.carrier_dim)).norm());
  for (std::size_t a = 0; a < basis.size(); ++a) {
    worst = std::max(worst, (pi.image_of_ambient(basis[a].adjoint()) - pi.images[a].adjoint()).norm());
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Matrix lhs = pi.image_of_ambient(basis[a] * basis[b]);
      worst = std::max(worst, (lhs - pi.images[a] * pi.images[b]).norm());
    }
  }
  return worst;
}

Representation identity_representation(const MatrixAlgebra& a) {
  return {a, a.ambient_dim(), a.basis(), std::nullopt};
}

std::vector<Representation> irreducible_representations(const MatrixAlgebra& a) {
  if (!a.is_canonical()) throw DomainError("irreducible representations are enumerated for canonical algebras");
  std::vector<Representation> out;
  const auto& dims = a.block_dims();
  for (std::size_t b = 0; b < dims.size(); ++b) {
    const int nb = dims[b];
    const int off = a.block_offsets()[b];
    std::vector<Matrix> images;
    for (const Matrix& e : a.basis()) images.push_back(e.block(off, off, nb, nb));
    out.push_back({a, nb, std::move(images), std::nullopt});
  }
  return out;
}

Representation gns_construct(const State& state, const MatrixAlgebra& a, double tol) {
  if (!state.owner().compatible(a)) throw DomainError("state does not live on this algebra");
  const int n = a.ambient_dim();
  const auto& basis = a.basis();
  const auto d = static_cast<Eigen::Index>(basis.size());
  const Matrix rho = state.ambient_density();
  const Matrix q = stack(basis, n);

  // Gram matrix G_ab = w(b_a^* b_b) = <b_a, b_b rho>.
  std::vector<Matrix> right_rho;
  right_rho.reserve(basis.size());
  for (const Matrix& b : basis) right_rho.push_back(b * rho);
  const Matrix gram = hermitian_part(q.adjoint() * stack(right_rho, n));

  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const RealVector& lambda = es.eigenvalues();
  const double lmax = lambda(d - 1);
  Eigen::Index first = 0;
  while (first < d && lambda(first) <= tol * lmax) ++first;
  const Eigen::Index c = d - first;
  const Matrix u = es.eigenvectors().rightCols(c);
  const RealVector sq = lambda.tail(c).cwiseSqrt();

  // With L(x)_{ca} = <b_c, x b_a>, pi(x) = L^{1/2} U^* L(x) U L^{-1/2}.
  Representation pi{a, static_cast<int>(c), {}, std::nullopt};
  pi.images.reserve(basis.size());
  std::vector<Matrix> products(basis.size());
  for (const Matrix& x : basis) {
    for (std::size_t k = 0; k < basis.size(); ++k) products[k] = x * basis[k];
    const Matrix lx = q.adjoint() * stack(products, n);
    Matrix img = sq.cast<Complex>().asDiagonal() * (u.adjoint() * lx * u);
    img = img * sq.cwiseInverse().cast<Complex>().asDiagonal();
    pi.images.push_back(std::move(img));
  }
  const Vector e = a.coordinates(Matrix::Identity(n, n));
  pi.cyclic_vector = sq.cast<Complex>().asDiagonal() * (u.adjoint() * e);
  return pi;
}

MatrixAlgebra image_double_commutant(const Representation& pi, double tol) {
  return generated_star_algebra(pi.carrier_dim, pi.images, tol);
}

bool is_irreducible(const Representation& pi, double tol) {
  if (pi.carrier_dim == 1) return true;
  return commutant(image_double_commutant(pi, tol), tol).linear_dim() == 1;
}

Representation induced_representation(const Representation& pi, const TensorAlgebra& t, Side side) {
  if (!pi.source.compatible(t.product())) throw DomainError("representation is not of the tensor product");
  const MatrixAlgebra& factor = side == Side::left ? t.left() : t.right();
  Representation out{factor, pi.carrier_dim, {}, std::nullopt};
  for (int k = 0; k < factor.linear_dim(); ++k) {
    const AlgebraElement x = factor.basis_element(k);
    out.images.push_back(pi.image(side == Side::left ? t.embed_left(x) : t.embed_right(x)));
  }
  return out;
}

bool check_tensor_factorization(const Representation& pi, const TensorAlgebra& t, double tol) {
  const MatrixAlgebra whole = image_double_commutant(pi);
  const Representation p1 = induced_representation(pi, t, Side::left);
  const Representation p2 = induced_representation(pi, t, Side::right);
  std::vector<Matrix> products;
  products.reserve(p1.images.size() * p2.images.size());
  for (const Matrix& x : p1.images)
    for (const Matrix& y : p2.images) products.push_back(x * y);
  const MatrixAlgebra factored = generated_star_algebra(pi.carrier_dim, products);
  return same_span(whole, factored, tol);
}

bool separated_in_representation(const Representation& pi, const TensorAlgebra& t, double tol) {
  const Representation p1 = induced_representation(pi, t, Side::left);
  const Representation p2 = induced_representation(pi, t, Side::right);
  return is_commutative(image_double_commutant(p1, tol), tol) ||
         is_commutative(image_double_commutant(p2, tol), tol);
}

}  // namespace opalg
