#include "epkit/classify.hpp"

#include <algorithm>

#include "epkit/pinv.hpp"
#include "epkit/subspace.hpp"

namespace epkit {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.is_square()) throw NotSquare(std::string(what) + " is defined for square matrices only");
}

}  // namespace

bool is_ep(const SvdFactorization& f, const ToleranceConfig& tol) {
  if (f.left_vectors.rows() != f.right_vectors.rows()) {
    throw NotSquare("EP is defined for square matrices only");
  }
  // R(M*) is spanned by the leading right singular vectors of M.
  return subspace_eq(range_basis(f), carrier_basis(f), tol);
}

bool is_ep(const ComplexMatrix& m, const ToleranceConfig& tol) {
  require_square(m, "EP");
  return is_ep(svd(m, tol), tol);
}

bool is_hypo_ep(const ComplexMatrix& m, const ToleranceConfig& tol) {
  require_square(m, "hypo-EP");
  const SvdFactorization f = svd(m, tol);
  return subspace_leq(range_basis(f), carrier_basis(f), tol);
}

bool is_normal(const ComplexMatrix& m, const ToleranceConfig& tol) {
  require_square(m, "normality");
  const DenseMatrix& M = m.dense();
  const double norm = spectral_norm(M);
  const double residual = spectral_norm(M * M.adjoint() - M.adjoint() * M);
  return residual <= tol.eq_atol * (1.0 + norm * norm);
}

ClassificationReport classify(const ComplexMatrix& m, const ToleranceConfig& tol) {
  require_square(m, "classification");
  const SvdFactorization f = svd(m, tol);
  const OrthonormalBasis range = range_basis(f);
  const OrthonormalBasis co_range = carrier_basis(f);
  const DenseMatrix pinv = pseudoinverse(f).dense();
  const DenseMatrix& M = m.dense();

  ClassificationReport r;
  r.dim = m.rows();
  r.rank = f.numerical_rank;
  r.is_ep = subspace_eq(range, co_range, tol);
  r.is_hypo_ep = subspace_leq(range, co_range, tol);
  r.is_normal = is_normal(m, tol);
  r.gamma = reduced_min_modulus(f);
  r.spectral_radius = spectral_radius(m, tol);
  r.commutator_residual = spectral_norm(pinv * M - M * pinv);
  r.range_gap = projector_distance(range, co_range);
  const auto angles = principal_angles(range, co_range);
  r.max_principal_angle = angles.empty() ? 0.0 : angles.back();
  r.zero_operator = f.numerical_rank == 0;
  r.commutator_agrees = r.is_ep == (r.commutator_residual <= tol.eq_atol);
  return r;
}

}  // namespace epkit
