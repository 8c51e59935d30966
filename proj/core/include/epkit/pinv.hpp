#pragma once

// Moore-Penrose pseudoinverse and the quantities derived from it: Penrose
// residuals, the generalized-inverse identity suite, reduced minimum
// modulus, spectral radius, polar decomposition, fractional powers of |T|
// and direct sums.

#include <map>
#include <string>

#include "epkit/matrix.hpp"

namespace epkit {

/// T = U_T |T|, with U_T the partial isometry that annihilates N(T).
struct PolarFactors {
  ComplexMatrix isometry_part;
  ComplexMatrix modulus_part;
};

struct MpIdentityReport {
  /// Residual per identity; subspace identities report projector distances.
  std::map<std::string, double> residuals;
  /// eq_atol * (1 + ||T|| + ||T^+||).
  double threshold = 0.0;
  bool pass = false;
};

/// T^+ inverts T on its carrier and vanishes on R(T)^perp. Only singular
/// values above the rank cutoff are inverted.
ComplexMatrix pseudoinverse(const SvdFactorization& f);
ComplexMatrix pseudoinverse(const ComplexMatrix& m, const ToleranceConfig& tol = {});

/// Residuals of the four Penrose equations for a candidate inverse `mp`:
///   "mxm"  ||M X M - M||      "xmx" ||X M X - X||
///   "mx_h" ||MX - (MX)*||     "xm_h" ||XM - (XM)*||
std::map<std::string, double> penrose_residuals(const ComplexMatrix& m, const ComplexMatrix& mp);

/// Evaluates the generalized-inverse identities (null spaces, ranges,
/// projector forms, double pseudoinverse, adjoint and Gram-product rules).
/// Every side is computed from its own factorization.
MpIdentityReport mp_identity_suite(const ComplexMatrix& m, const ToleranceConfig& tol = {});

/// Smallest singular value above the cutoff; 0 for the zero matrix.
double reduced_min_modulus(const SvdFactorization& f);
double reduced_min_modulus(const ComplexMatrix& m, const ToleranceConfig& tol = {});

/// max |lambda| over the eigenvalues of a square matrix.
double spectral_radius(const ComplexMatrix& m, const ToleranceConfig& tol = {});

PolarFactors polar_decomposition(const SvdFactorization& f);
PolarFactors polar_decomposition(const ComplexMatrix& m, const ToleranceConfig& tol = {});

/// |T|^alpha for alpha > 0. Eigenvalues of |T| at or below the rank cutoff
/// are treated as exact zeros, negatives are clamped to zero.
ComplexMatrix fractional_abs_power(const ComplexMatrix& m, double alpha, const ToleranceConfig& tol = {});

/// Block-diagonal embedding diag(A, B).
ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace epkit
