#pragma once

#include "epkit/matrix.hpp"

namespace epkit {

/// Per-matrix verdicts and the numbers behind them, all derived from one
/// shared SVD (plus one eigenvalue computation for the spectral radius).
struct ClassificationReport {
  Index dim = 0;
  Index rank = 0;
  bool is_ep = false;
  bool is_hypo_ep = false;
  bool is_normal = false;
  /// Reduced minimum modulus; 0 when `zero_operator` is set.
  double gamma = 0.0;
  double spectral_radius = 0.0;
  /// ||T^+ T - T T^+||_2
  double commutator_residual = 0.0;
  /// ||P_R(T) - P_R(T*)||_2
  double range_gap = 0.0;
  /// Largest principal angle between R(T) and R(T*), radians.
  double max_principal_angle = 0.0;
  bool zero_operator = false;
  /// is_ep agrees with (commutator_residual <= eq_atol). A false value marks
  /// a matrix sitting on the tolerance boundary.
  bool commutator_agrees = true;

  bool operator==(const ClassificationReport&) const = default;
};

/// R(M) = R(M*). Closed range holds automatically in finite dimension.
bool is_ep(const ComplexMatrix& m, const ToleranceConfig& tol = {});
bool is_ep(const SvdFactorization& f, const ToleranceConfig& tol = {});

/// R(M) contained in R(M*).
bool is_hypo_ep(const ComplexMatrix& m, const ToleranceConfig& tol = {});

/// ||M M* - M* M|| <= eq_atol (1 + ||M||^2).
bool is_normal(const ComplexMatrix& m, const ToleranceConfig& tol = {});

ClassificationReport classify(const ComplexMatrix& m, const ToleranceConfig& tol = {});

}  // namespace epkit
