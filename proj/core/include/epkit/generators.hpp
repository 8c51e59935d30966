#pragma once

// Seeded generators of structured test matrices. Every construction is a
// deterministic function of its seed.

#include <cstdint>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

#include "epkit/matrix.hpp"

namespace epkit {

enum class Family { ep, non_ep, normal_ep, commuting_pair, perturbation_pair, product_pair, sequence };

std::string_view to_string(Family f);
Family parse_family(std::string_view name);

struct GeneratorSpec {
  Index dim = 8;
  Index rank = 6;
  double condition_bound = 100.0;
  std::uint64_t seed = 0;
  Family family = Family::ep;
  /// Family-specific sub-construction; see gen_matrix.
  std::uint32_t variant = 0;

  /// Throws InvalidSpec.
  void validate() const;
};

/// Domination constants for perturbation pairs: ||Sx|| <= a ||Tx|| and
/// ||S* z|| <= b ||T* z||.
struct PerturbationSpec {
  double a = 0.5;
  double b = 0.5;

  /// Throws InvalidSpec unless both lie in (0, 1).
  void validate() const;
};

/// (T, S): `first` is the operator under study, `second` its partner.
struct MatrixPair {
  ComplexMatrix first;
  ComplexMatrix second;
};

enum class SequenceKind {
  /// T_k = (1 + 1/k) T.
  scaled,
  /// T_k = (1 + 2^-k) T.
  geometric,
  /// T_k = T + (1/k) E with E supported on the range/carrier blocks of T.
  in_range,
  /// T_k = T + (1/k) G with G invertible on N(T); the rank drops at the limit.
  off_range,
  /// diag(1, 1/2, ..., 1/k, 0, ...) with limit diag(1, ..., 1/N).
  harmonic,
  /// EP terms with gamma(T_k) >= delta whose ranges rotate towards the limit.
  e_delta,
};

std::string_view to_string(SequenceKind k);

struct MatrixSequence {
  SequenceKind kind;
  std::vector<ComplexMatrix> terms;
  ComplexMatrix limit;
  /// Declared behaviour: pseudoinverses converge to limit^+.
  bool expect_convergent;
};

using GeneratedInstance = std::variant<ComplexMatrix, MatrixPair, MatrixSequence>;

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Building blocks shared by gen_matrix and the property verifiers.
class MatrixGenerator {
 public:
  explicit MatrixGenerator(std::uint64_t seed, ToleranceConfig tol = {});

  double uniform(double lo, double hi);
  Complex gaussian();
  DenseMatrix gaussian_matrix(Index rows, Index cols);
  /// Haar-distributed unitary (QR of a complex Gaussian, phases fixed).
  DenseMatrix unitary(Index n);
  /// Singular values log-uniform in [scale / condition_bound, scale], the
  /// largest pinned to `scale`, smallest to scale / condition_bound.
  std::vector<double> singular_spectrum(Index k, double condition_bound, double scale);
  /// Invertible k x k matrix with condition number <= condition_bound.
  DenseMatrix invertible(Index k, double condition_bound, double scale);
  /// rows x cols matrix of exact rank k with controlled condition.
  ComplexMatrix ranked(Index rows, Index cols, Index k, double condition_bound);

  /// V diag(A, 0) V* with A invertible; returns T and stores V, A.
  struct EpParts {
    ComplexMatrix matrix;
    DenseMatrix basis;  // V
    DenseMatrix block;  // A
  };
  EpParts ep_parts(Index dim, Index rank, double condition_bound);
  ComplexMatrix ep(Index dim, Index rank, double condition_bound);
  /// Contains a nilpotent Jordan cell in a random unitary basis; rejection
  /// validated so that ||P_R(T) - P_R(T*)|| is bounded away from zero.
  ComplexMatrix non_ep(Index dim, Index rank, double condition_bound);
  /// V diag(d, 0) V* with nonzero complex d.
  ComplexMatrix normal_ep(Index dim, Index rank, double condition_bound);

  MatrixPair commuting_pair(Index dim, Index rank, double condition_bound, std::uint32_t variant);
  MatrixPair perturbation_pair(Index dim, Index rank, double condition_bound, const PerturbationSpec& p,
                               std::uint32_t variant);
  MatrixPair product_pair(Index dim, Index rank, double condition_bound, std::uint32_t variant);
  MatrixSequence sequence(Index dim, Index rank, double condition_bound, SequenceKind kind,
                          Index length = 50, double delta = 0.1);

  const ToleranceConfig& tolerance() const noexcept { return tol_; }

 private:
  std::mt19937_64 rng_;
  ToleranceConfig tol_;
};

/// Family semantics (`variant` selects a sub-construction):
///   ep, non_ep, normal_ep  single matrix
///   commuting_pair         0: S polynomial in T; 1: S commutes with T^+ via
///                          the block form; 2: uncorrelated S (control)
///   perturbation_pair      0: S = cT; 1: S = V diag(B, 0) V*; 2: normal pair
///   product_pair           0: independent EP S, T; 1: shared range; 2: S invertible
///   sequence               variant indexes SequenceKind
/// Throws InvalidSpec (rank > dim, condition_bound < 1, non-EP at full rank).
GeneratedInstance gen_matrix(const GeneratorSpec& spec, const ToleranceConfig& tol = {},
                             const PerturbationSpec& perturbation = {});

/// min eig(A - B) >= -eq_atol (1 + ||A||) for Hermitian A, B.
/// Throws NotHermitian, DimensionMismatch.
bool psd_dominates(const ComplexMatrix& a, const ComplexMatrix& b, const ToleranceConfig& tol = {});

}  // namespace epkit
