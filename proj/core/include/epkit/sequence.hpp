#pragma once

// Finite-window study of a matrix sequence T_k -> T: does T_k^+ converge,
// does T_k^+ T_k converge, and is sup ||T_k^+|| bounded?
//
// Convergence on a window of K terms is judged by the tail: an error curve
// e(k) converges when e(K) <= convergence_tol, or when it contracts
// e(K) <= contraction * e(K/2). Boundedness of ||T_k^+|| is judged the same
// way: growth ||T_K^+|| / ||T_{K/2}^+|| above growth_limit marks divergence.

#include <optional>
#include <vector>

#include "epkit/generators.hpp"

namespace epkit {

struct SequenceCriteria {
  double convergence_tol = 1e-9;
  double contraction = 0.75;
  double growth_limit = 1.25;
};

struct SequenceStudy {
  /// ||T_k - T||
  std::vector<double> term_error;
  /// ||T_k^+ - T^+||
  std::vector<double> pinv_error;
  /// ||T_k^+ T_k - T^+ T||
  std::vector<double> projector_error;
  /// ||T_k^+||
  std::vector<double> pinv_norm;

  bool terms_converge = false;
  bool pinv_converges = false;
  bool projector_converges = false;
  bool pinv_bounded = false;
  double sup_pinv_norm = 0.0;
  /// First k (1-based) from which ||T_j^+ - T^+|| <= convergence_tol for all j >= k.
  std::optional<Index> pinv_below_tol_from;

  /// The three pseudoinverse conditions agree.
  bool conditions_agree() const {
    return pinv_converges == projector_converges && projector_converges == pinv_bounded;
  }
};

SequenceStudy study_sequence(const MatrixSequence& seq, const ToleranceConfig& tol = {},
                             const SequenceCriteria& criteria = {});

}  // namespace epkit
