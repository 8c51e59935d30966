#pragma once

// Dense complex matrices and the factorization kernels everything else is
// built on: SVD, Hermitian eigendecomposition and general eigenvalues.

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "epkit/error.hpp"

namespace epkit {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXcd;

/// Largest admitted row or column count.
inline constexpr Index kMaxDimension = 256;

/// Numerical tolerances shared by every rank and equality decision.
///
/// `rank_rtol` is the relative singular-value cutoff: sigma_i counts towards
/// the numerical rank iff sigma_i > rank_rtol * sigma_1. `eq_atol` is the
/// absolute residual below which two matrices, projectors or subspaces are
/// considered equal.
struct ToleranceConfig {
  double rank_rtol = 1e-10;
  double eq_atol = 1e-8;

  /// Throws InvalidTolerance unless both values lie in (0, 1).
  void validate() const;

  bool operator==(const ToleranceConfig&) const = default;
};

/// Immutable dense complex matrix with positive, capped dimensions and
/// finite entries.
class ComplexMatrix {
 public:
  /// Zero matrix.
  ComplexMatrix(Index rows, Index cols);
  explicit ComplexMatrix(DenseMatrix entries);
  /// `row_major` must hold rows*cols entries.
  ComplexMatrix(Index rows, Index cols, std::span<const Complex> row_major);

  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static ComplexMatrix identity(Index n);
  static ComplexMatrix zero(Index rows, Index cols) { return {rows, cols}; }
  static ComplexMatrix diagonal(std::span<const Complex> entries);
  static ComplexMatrix diagonal(std::initializer_list<Complex> entries);

  Index rows() const noexcept { return m_.rows(); }
  Index cols() const noexcept { return m_.cols(); }
  bool is_square() const noexcept { return m_.rows() == m_.cols(); }

  /// Bounds-checked element access.
  Complex operator()(Index r, Index c) const;

  const DenseMatrix& dense() const noexcept { return m_; }
  std::vector<Complex> row_major() const;

  /// Exact (bitwise value) equality.
  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  DenseMatrix m_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& m);

/// Matrix product; throws DimensionMismatch when a.cols() != b.rows().
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);

/// m^n for n >= 0 (m^0 = I).
ComplexMatrix power(const ComplexMatrix& m, int n);

/// Full singular value decomposition M = U diag(sigma) V*.
///
/// U is rows x rows, V is cols x cols, singular values are non-increasing
/// and there are min(rows, cols) of them. The first `numerical_rank`
/// columns of U and V span R(M) and N(M)^perp respectively; the remaining
/// columns of V span N(M).
struct SvdFactorization {
  ComplexMatrix left_vectors;
  std::vector<double> singular_values;
  ComplexMatrix right_vectors;
  Index numerical_rank = 0;
  /// Absolute singular-value threshold, rank_rtol * sigma_1.
  double cutoff = 0.0;
};

SvdFactorization svd(const ComplexMatrix& m, const ToleranceConfig& tol = {});

struct HermitianEigen {
  /// Non-increasing.
  std::vector<double> eigenvalues;
  /// Unitary; column i belongs to eigenvalues[i].
  ComplexMatrix eigenvectors;
};

/// Throws NotHermitian when ||H - H*|| > eq_atol * (1 + ||H||).
HermitianEigen hermitian_eig(const ComplexMatrix& h, const ToleranceConfig& tol = {});

/// All n eigenvalues of a square matrix, ordered by non-increasing modulus.
std::vector<Complex> eigenvalues(const ComplexMatrix& m, const ToleranceConfig& tol = {});

/// Spectral norm (largest singular value); 0 for the zero matrix.
double operator_norm(const ComplexMatrix& m);

/// Spectral norm of an arbitrary dense block, including empty ones.
double spectral_norm(const DenseMatrix& m);

}  // namespace epkit
