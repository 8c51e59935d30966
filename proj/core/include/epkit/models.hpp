#pragma once

// Diagonal truncations of classical infinite-dimensional operators, for
// studying how gamma, spectral radius and pseudoinverse norms behave as the
// truncation grows.

#include <string>
#include <string_view>
#include <vector>

#include "epkit/matrix.hpp"

namespace epkit {

enum class ModelFamilyId {
  /// Multiplication by 1/sqrt(t) on L^2[0,1], sampled at grid midpoints.
  mult_inv_sqrt,
  /// diag(1, 2, 3, ..., n).
  diag_n,
  /// diag(1, 2, 1/3, 4, 1/5, ...): even slots j, odd slots 1/j.
  diag_alternating,
  /// diag(1, 1/2, ..., 1/n, 0, ..., 0) embedded in a larger space.
  diag_harmonic_truncated,
};

std::string_view to_string(ModelFamilyId id);
/// Throws UnknownFamily.
ModelFamilyId parse_model_family(std::string_view name);

/// Prescribed diagonal of the n-th truncation, padded with zeros to
/// `ambient_dim` (defaults to n).
std::vector<double> model_diagonal(ModelFamilyId family, Index n, Index ambient_dim = 0);

/// Throws InvalidDimension for n < 1 or ambient_dim < n.
ComplexMatrix realize(ModelFamilyId family, Index n, Index ambient_dim = 0);

struct LimitStudyRow {
  Index n = 0;
  double gamma = 0.0;
  double spectral_radius = 0.0;
  bool is_ep = false;
  double pinv_norm = 0.0;

  bool operator==(const LimitStudyRow&) const = default;
};

struct LimitStudy {
  ModelFamilyId family = ModelFamilyId::diag_n;
  Index n_max = 0;
  /// Common ambient dimension of the harmonic family (n_max); 0 when each
  /// truncation lives in its own C^n.
  Index ambient_dim = 0;
  std::vector<LimitStudyRow> rows;

  bool operator==(const LimitStudy&) const = default;
};

/// One row per n = 1..n_max. Throws InvalidDimension for n_max < 2.
LimitStudy limit_study(ModelFamilyId family, Index n_max, const ToleranceConfig& tol = {});

}  // namespace epkit
