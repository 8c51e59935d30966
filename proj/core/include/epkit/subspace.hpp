#pragma once

// Orthonormal bases and orthogonal projectors for R(T), N(T) and the
// carrier C(T) = N(T)^perp, plus inclusion/equality tests between subspaces.
//
// Range, null space and carrier of one matrix should always be taken from
// the same SvdFactorization so that their dimensions agree with a single
// numerical-rank decision.

#include <vector>

#include "epkit/matrix.hpp"

namespace epkit {

class OrthonormalBasis {
 public:
  /// Columns of `vectors` must be orthonormal within `ortho_tol`; zero
  /// columns describe the trivial subspace.
  explicit OrthonormalBasis(DenseMatrix vectors, double ortho_tol = 1e-8);

  /// The trivial subspace {0} of C^ambient_dim.
  static OrthonormalBasis empty(Index ambient_dim);

  /// Orthonormal basis of the span of the columns of `generators`.
  static OrthonormalBasis span_of(const ComplexMatrix& generators, const ToleranceConfig& tol = {});

  Index ambient_dim() const noexcept { return vectors_.rows(); }
  Index dim() const noexcept { return vectors_.cols(); }
  bool is_empty() const noexcept { return vectors_.cols() == 0; }
  const DenseMatrix& vectors() const noexcept { return vectors_; }

 private:
  DenseMatrix vectors_;
};

/// Orthogonal projection: idempotent and self-adjoint.
class Projector {
 public:
  explicit Projector(ComplexMatrix matrix, double tol = 1e-8);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  /// Trace rounded to the nearest integer.
  Index rank() const;

 private:
  ComplexMatrix matrix_;
};

OrthonormalBasis range_basis(const SvdFactorization& f);
OrthonormalBasis null_basis(const SvdFactorization& f);
/// C(T) = N(T)^perp, the leading right singular vectors.
OrthonormalBasis carrier_basis(const SvdFactorization& f);

OrthonormalBasis range_basis(const ComplexMatrix& m, const ToleranceConfig& tol = {});
OrthonormalBasis null_basis(const ComplexMatrix& m, const ToleranceConfig& tol = {});
OrthonormalBasis carrier_basis(const ComplexMatrix& m, const ToleranceConfig& tol = {});

/// P = V V*.
Projector projector(const OrthonormalBasis& b);

/// ||(I - P_B) V_A||_2; zero iff span(A) is contained in span(B).
double inclusion_residual(const OrthonormalBasis& a, const OrthonormalBasis& b);

/// span(A) within span(B): inclusion_residual(A, B) <= eq_atol.
bool subspace_leq(const OrthonormalBasis& a, const OrthonormalBasis& b, const ToleranceConfig& tol = {});

/// Inclusion both ways.
bool subspace_eq(const OrthonormalBasis& a, const OrthonormalBasis& b, const ToleranceConfig& tol = {});

/// ||P_A - P_B||_2, equal to the sine of the largest principal angle when
/// dimensions agree and to 1 otherwise.
double projector_distance(const OrthonormalBasis& a, const OrthonormalBasis& b);

/// Principal angles in radians, ascending; min(dim A, dim B) values.
/// Diagnostic only.
std::vector<double> principal_angles(const OrthonormalBasis& a, const OrthonormalBasis& b);

}  // namespace epkit
