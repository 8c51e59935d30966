#include "epkit/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace epkit {

namespace {

void require_same_ambient(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionMismatch("subspaces live in C^" + std::to_string(a.ambient_dim()) +
                            " and C^" + std::to_string(b.ambient_dim()));
  }
}

DenseMatrix projector_matrix(const OrthonormalBasis& b) {
  if (b.is_empty()) return DenseMatrix::Zero(b.ambient_dim(), b.ambient_dim());
  return b.vectors() * b.vectors().adjoint();
}

}  // namespace

OrthonormalBasis::OrthonormalBasis(DenseMatrix vectors, double ortho_tol)
    : vectors_(std::move(vectors)) {
  if (vectors_.rows() < 1 || vectors_.rows() > kMaxDimension) {
    throw InvalidDimension("ambient dimension must lie in [1, " + std::to_string(kMaxDimension) + "]");
  }
  if (vectors_.cols() > vectors_.rows()) {
    throw InvalidDimension("more basis vectors than the ambient dimension");
  }
  if (!vectors_.allFinite()) throw NonFiniteValue("basis vectors must be finite");
  if (vectors_.cols() > 0) {
    const DenseMatrix gram = vectors_.adjoint() * vectors_;
    const double err = spectral_norm(gram - DenseMatrix::Identity(gram.rows(), gram.cols()));
    if (err > ortho_tol) {
      throw InvalidSpec("basis columns are not orthonormal (||V*V - I|| = " + std::to_string(err) + ")");
    }
  }
}

OrthonormalBasis OrthonormalBasis::empty(Index ambient_dim) {
  return OrthonormalBasis(DenseMatrix(ambient_dim, 0));
}

OrthonormalBasis OrthonormalBasis::span_of(const ComplexMatrix& generators, const ToleranceConfig& tol) {
  return range_basis(generators, tol);
}

Projector::Projector(ComplexMatrix matrix, double tol) : matrix_(std::move(matrix)) {
  if (!matrix_.is_square()) throw NotSquare("projector must be square");
  const DenseMatrix& P = matrix_.dense();
  if (spectral_norm(P * P - P) > tol) throw InvalidSpec("projector is not idempotent");
  if (spectral_norm(P - P.adjoint()) > tol) throw InvalidSpec("projector is not self-adjoint");
}

Index Projector::rank() const {
  return static_cast<Index>(std::lround(matrix_.dense().trace().real()));
}

OrthonormalBasis range_basis(const SvdFactorization& f) {
  return OrthonormalBasis(f.left_vectors.dense().leftCols(f.numerical_rank));
}

OrthonormalBasis null_basis(const SvdFactorization& f) {
  const Index n = f.right_vectors.cols();
  return OrthonormalBasis(f.right_vectors.dense().rightCols(n - f.numerical_rank));
}

OrthonormalBasis carrier_basis(const SvdFactorization& f) {
  return OrthonormalBasis(f.right_vectors.dense().leftCols(f.numerical_rank));
}

OrthonormalBasis range_basis(const ComplexMatrix& m, const ToleranceConfig& tol) {
  return range_basis(svd(m, tol));
}

OrthonormalBasis null_basis(const ComplexMatrix& m, const ToleranceConfig& tol) {
  return null_basis(svd(m, tol));
}

OrthonormalBasis carrier_basis(const ComplexMatrix& m, const ToleranceConfig& tol) {
  return carrier_basis(svd(m, tol));
}

Projector projector(const OrthonormalBasis& b) {
  return Projector(ComplexMatrix(projector_matrix(b)));
}

double inclusion_residual(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  require_same_ambient(a, b);
  if (a.is_empty()) return 0.0;
  if (b.is_empty()) return spectral_norm(a.vectors());
  const DenseMatrix rejected = a.vectors() - b.vectors() * (b.vectors().adjoint() * a.vectors());
  return spectral_norm(rejected);
}

bool subspace_leq(const OrthonormalBasis& a, const OrthonormalBasis& b, const ToleranceConfig& tol) {
  return inclusion_residual(a, b) <= tol.eq_atol;
}

bool subspace_eq(const OrthonormalBasis& a, const OrthonormalBasis& b, const ToleranceConfig& tol) {
  return subspace_leq(a, b, tol) && subspace_leq(b, a, tol);
}

double projector_distance(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  require_same_ambient(a, b);
  return spectral_norm(projector_matrix(a) - projector_matrix(b));
}

std::vector<double> principal_angles(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  require_same_ambient(a, b);
  if (a.is_empty() || b.is_empty()) return {};
  const DenseMatrix cross = a.vectors().adjoint() * b.vectors();
  Eigen::JacobiSVD<DenseMatrix> solver(cross);
  std::vector<double> angles;
  for (Index i = 0; i < solver.singularValues().size(); ++i) {
    angles.push_back(std::acos(std::clamp(solver.singularValues()(i), 0.0, 1.0)));
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

}  // namespace epkit
