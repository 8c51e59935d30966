#include "epkit/pinv.hpp"

#include <algorithm>
#include <cmath>

#include "epkit/subspace.hpp"

namespace epkit {

ComplexMatrix pseudoinverse(const SvdFactorization& f) {
  const Index k = f.numerical_rank;
  const DenseMatrix& U = f.left_vectors.dense();
  const DenseMatrix& V = f.right_vectors.dense();
  DenseMatrix result = DenseMatrix::Zero(V.rows(), U.rows());
  if (k > 0) {
    Eigen::VectorXd inv(k);
    for (Index i = 0; i < k; ++i) inv(i) = 1.0 / f.singular_values[static_cast<std::size_t>(i)];
    result = V.leftCols(k) * inv.asDiagonal() * U.leftCols(k).adjoint();
  }
  return ComplexMatrix(std::move(result));
}

ComplexMatrix pseudoinverse(const ComplexMatrix& m, const ToleranceConfig& tol) {
  return pseudoinverse(svd(m, tol));
}

std::map<std::string, double> penrose_residuals(const ComplexMatrix& m, const ComplexMatrix& mp) {
  if (mp.rows() != m.cols() || mp.cols() != m.rows()) {
    throw DimensionMismatch("candidate inverse must have the transposed shape");
  }
  const DenseMatrix& M = m.dense();
  const DenseMatrix& X = mp.dense();
  const DenseMatrix MX = M * X;
  const DenseMatrix XM = X * M;
  return {
      {"mxm", spectral_norm(MX * M - M)},
      {"xmx", spectral_norm(XM * X - X)},
      {"mx_h", spectral_norm(MX - MX.adjoint())},
      {"xm_h", spectral_norm(XM - XM.adjoint())},
  };
}

MpIdentityReport mp_identity_suite(const ComplexMatrix& m, const ToleranceConfig& tol) {
  const ComplexMatrix t_adj = adjoint(m);

  const SvdFactorization f_t = svd(m, tol);
  const ComplexMatrix t_pinv = pseudoinverse(f_t);
  const SvdFactorization f_pinv = svd(t_pinv, tol);
  const SvdFactorization f_adj = svd(t_adj, tol);
  const ComplexMatrix adj_pinv = pseudoinverse(f_adj);
  const SvdFactorization f_adj_pinv = svd(adj_pinv, tol);

  const DenseMatrix& T = m.dense();
  const DenseMatrix& Tp = t_pinv.dense();
  const DenseMatrix& Tap = adj_pinv.dense();

  MpIdentityReport report;
  auto& r = report.residuals;
  r["null_pinv_eq_null_adjoint"] = projector_distance(null_basis(f_pinv), null_basis(f_adj));
  r["range_pinv_eq_carrier"] = projector_distance(range_basis(f_pinv), carrier_basis(f_t));
  r["pinv_t_eq_proj_range_pinv"] =
      spectral_norm(Tp * T - projector(range_basis(f_pinv)).matrix().dense());
  r["t_pinv_eq_proj_range"] = spectral_norm(T * Tp - projector(range_basis(f_t)).matrix().dense());
  r["double_pinv"] = spectral_norm(pseudoinverse(f_pinv).dense() - T);
  r["adjoint_pinv"] = spectral_norm(Tap - Tp.adjoint());
  r["null_adjoint_pinv_eq_null"] = projector_distance(null_basis(f_adj_pinv), null_basis(f_t));
  r["gram_pinv"] = spectral_norm(pseudoinverse(multiply(t_adj, m), tol).dense() - Tp * Tap);
  r["outer_gram_pinv"] = spectral_norm(pseudoinverse(multiply(m, t_adj), tol).dense() - Tap * Tp);

  const double norm_t = f_t.singular_values.empty() ? 0.0 : f_t.singular_values.front();
  const double norm_pinv = f_pinv.singular_values.empty() ? 0.0 : f_pinv.singular_values.front();
  report.threshold = tol.eq_atol * (1.0 + norm_t + norm_pinv);
  report.pass = std::all_of(r.begin(), r.end(),
                            [&](const auto& kv) { return kv.second <= report.threshold; });
  return report;
}

double reduced_min_modulus(const SvdFactorization& f) {
  if (f.numerical_rank == 0) return 0.0;
  return f.singular_values[static_cast<std::size_t>(f.numerical_rank - 1)];
}

double reduced_min_modulus(const ComplexMatrix& m, const ToleranceConfig& tol) {
  return reduced_min_modulus(svd(m, tol));
}

double spectral_radius(const ComplexMatrix& m, const ToleranceConfig& tol) {
  double r = 0.0;
  for (const Complex& lambda : eigenvalues(m, tol)) r = std::max(r, std::abs(lambda));
  return r;
}

PolarFactors polar_decomposition(const SvdFactorization& f) {
  const DenseMatrix& U = f.left_vectors.dense();
  const DenseMatrix& V = f.right_vectors.dense();
  if (U.rows() != V.rows()) throw NotSquare("polar decomposition requires a square matrix");
  const Index n = V.rows();
  const Index k = f.numerical_rank;

  DenseMatrix isometry = DenseMatrix::Zero(n, n);
  if (k > 0) isometry = U.leftCols(k) * V.leftCols(k).adjoint();

  Eigen::VectorXd sigma(n);
  for (Index i = 0; i < n; ++i) sigma(i) = f.singular_values[static_cast<std::size_t>(i)];
  DenseMatrix modulus = V * sigma.asDiagonal() * V.adjoint();
  modulus = 0.5 * (modulus + modulus.adjoint());

  return {ComplexMatrix(std::move(isometry)), ComplexMatrix(std::move(modulus))};
}

PolarFactors polar_decomposition(const ComplexMatrix& m, const ToleranceConfig& tol) {
  if (!m.is_square()) throw NotSquare("polar decomposition requires a square matrix");
  return polar_decomposition(svd(m, tol));
}

ComplexMatrix fractional_abs_power(const ComplexMatrix& m, double alpha, const ToleranceConfig& tol) {
  if (!m.is_square()) throw NotSquare("fractional_abs_power requires a square matrix");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidExponent("exponent must be a positive finite real");
  }
  const ComplexMatrix modulus = polar_decomposition(m, tol).modulus_part;
  const HermitianEigen eig = hermitian_eig(modulus, tol);
  const double top = eig.eigenvalues.empty() ? 0.0 : std::max(eig.eigenvalues.front(), 0.0);
  const double cutoff = tol.rank_rtol * top;

  const Index n = modulus.rows();
  Eigen::VectorXd powered(n);
  for (Index i = 0; i < n; ++i) {
    const double lambda = eig.eigenvalues[static_cast<std::size_t>(i)];
    powered(i) = lambda > cutoff ? std::pow(lambda, alpha) : 0.0;
  }
  const DenseMatrix& Q = eig.eigenvectors.dense();
  DenseMatrix result = Q * powered.asDiagonal() * Q.adjoint();
  result = 0.5 * (result + result.adjoint());
  return ComplexMatrix(std::move(result));
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  DenseMatrix out = DenseMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a.dense();
  out.bottomRightCorner(b.rows(), b.cols()) = b.dense();
  return ComplexMatrix(std::move(out));
}

}  // namespace epkit
