#include "epkit/models.hpp"

#include <cmath>
#include <string>

#include "epkit/classify.hpp"
#include "epkit/pinv.hpp"

namespace epkit {

std::string_view to_string(ModelFamilyId id) {
  switch (id) {
    case ModelFamilyId::mult_inv_sqrt: return "mult_inv_sqrt";
    case ModelFamilyId::diag_n: return "diag_n";
    case ModelFamilyId::diag_alternating: return "diag_alternating";
    case ModelFamilyId::diag_harmonic_truncated: return "diag_harmonic_truncated";
  }
  return "unknown";
}

ModelFamilyId parse_model_family(std::string_view name) {
  for (auto id : {ModelFamilyId::mult_inv_sqrt, ModelFamilyId::diag_n, ModelFamilyId::diag_alternating,
                  ModelFamilyId::diag_harmonic_truncated}) {
    if (to_string(id) == name) return id;
  }
  throw UnknownFamily("unknown model family '" + std::string(name) + "'");
}

std::vector<double> model_diagonal(ModelFamilyId family, Index n, Index ambient_dim) {
  if (ambient_dim == 0) ambient_dim = n;
  if (n < 1 || ambient_dim < n || ambient_dim > kMaxDimension) {
    throw InvalidDimension("truncation needs 1 <= n <= ambient_dim <= " + std::to_string(kMaxDimension));
  }
  std::vector<double> d(static_cast<std::size_t>(ambient_dim), 0.0);
  for (Index i = 0; i < n; ++i) {
    const double j = static_cast<double>(i + 1);
    double v = 0.0;
    switch (family) {
      case ModelFamilyId::mult_inv_sqrt: {
        const double t = (j - 0.5) / static_cast<double>(n);
        v = 1.0 / std::sqrt(t);
        break;
      }
      case ModelFamilyId::diag_n: v = j; break;
      case ModelFamilyId::diag_alternating: v = (i % 2 == 1) ? j : 1.0 / j; break;
      case ModelFamilyId::diag_harmonic_truncated: v = 1.0 / j; break;
    }
    d[static_cast<std::size_t>(i)] = v;
  }
  return d;
}

ComplexMatrix realize(ModelFamilyId family, Index n, Index ambient_dim) {
  const auto d = model_diagonal(family, n, ambient_dim);
  std::vector<Complex> entries(d.begin(), d.end());
  return ComplexMatrix::diagonal(entries);
}

LimitStudy limit_study(ModelFamilyId family, Index n_max, const ToleranceConfig& tol) {
  if (n_max < 2) throw InvalidDimension("limit study needs n_max >= 2");
  LimitStudy study;
  study.family = family;
  study.n_max = n_max;
  study.ambient_dim = family == ModelFamilyId::diag_harmonic_truncated ? n_max : 0;
  for (Index n = 1; n <= n_max; ++n) {
    const ComplexMatrix t = realize(family, n, study.ambient_dim);
    const SvdFactorization f = svd(t, tol);
    LimitStudyRow row;
    row.n = n;
    row.gamma = reduced_min_modulus(f);
    row.spectral_radius = spectral_radius(t, tol);
    row.is_ep = is_ep(f, tol);
    row.pinv_norm = operator_norm(pseudoinverse(f));
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace epkit
