#include "epkit/sequence.hpp"

#include <algorithm>

#include "epkit/pinv.hpp"

namespace epkit {

namespace {

bool tail_converges(const std::vector<double>& e, const SequenceCriteria& c) {
  const double last = e.back();
  const double mid = e[e.size() / 2 - 1];
  return last <= c.convergence_tol || last <= c.contraction * mid;
}

}  // namespace

SequenceStudy study_sequence(const MatrixSequence& seq, const ToleranceConfig& tol,
                             const SequenceCriteria& criteria) {
  if (seq.terms.size() < 2) throw InvalidSpec("sequence study needs at least two terms");
  const SvdFactorization f_limit = svd(seq.limit, tol);
  const DenseMatrix limit_pinv = pseudoinverse(f_limit).dense();
  const DenseMatrix limit_proj = limit_pinv * seq.limit.dense();

  SequenceStudy s;
  for (const ComplexMatrix& term : seq.terms) {
    if (term.rows() != seq.limit.rows() || term.cols() != seq.limit.cols()) {
      throw DimensionMismatch("sequence terms must match the limit's shape");
    }
    const DenseMatrix p = pseudoinverse(term, tol).dense();
    s.term_error.push_back(spectral_norm(term.dense() - seq.limit.dense()));
    s.pinv_error.push_back(spectral_norm(p - limit_pinv));
    s.projector_error.push_back(spectral_norm(p * term.dense() - limit_proj));
    s.pinv_norm.push_back(spectral_norm(p));
  }

  s.terms_converge = tail_converges(s.term_error, criteria);
  s.pinv_converges = tail_converges(s.pinv_error, criteria);
  s.projector_converges = tail_converges(s.projector_error, criteria);
  s.sup_pinv_norm = *std::max_element(s.pinv_norm.begin(), s.pinv_norm.end());
  const double mid_norm = s.pinv_norm[s.pinv_norm.size() / 2 - 1];
  s.pinv_bounded = s.pinv_norm.back() <= criteria.growth_limit * std::max(mid_norm, criteria.convergence_tol);

  for (std::size_t k = s.pinv_error.size(); k-- > 0;) {
    if (s.pinv_error[k] > criteria.convergence_tol) break;
    s.pinv_below_tol_from = static_cast<Index>(k + 1);
  }
  return s;
}

}  // namespace epkit
