#pragma once

// Property-based verifiers, one per EP characterization. Each verifier runs
// a batch of independently seeded trials and folds them into a
// TheoremVerdict.
//
// Failure policy: a boolean equivalence that disagrees is a failure; a
// residual that should vanish fails above 10 * eq_atol and is counted as a
// warning in (eq_atol, 10 * eq_atol].

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epkit/generators.hpp"

namespace epkit {

struct NamedMatrix {
  std::string name;
  ComplexMatrix matrix;

  bool operator==(const NamedMatrix&) const = default;
};

struct Counterexample {
  /// Lowest failing trial index.
  std::size_t trial = 0;
  std::string reason;
  std::vector<NamedMatrix> matrices;

  bool operator==(const Counterexample&) const = default;
};

struct TheoremVerdict {
  std::string theorem_id;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::size_t warnings = 0;
  /// Trials on which the property's hypothesis side held / did not hold.
  std::size_t accepting = 0;
  std::size_t rejecting = 0;
  /// The verifier checks an "if and only if" and needs both kinds of trial.
  bool equivalence = false;
  double worst_residual = 0.0;
  std::optional<Counterexample> counterexample;
  std::int64_t elapsed_ms = 0;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
  std::optional<std::string> configuration_error;

  bool passed() const { return failures == 0 && !configuration_error; }
  bool operator==(const TheoremVerdict&) const = default;
};

struct RunOptions {
  /// Worker threads for trials; results do not depend on this.
  unsigned threads = 1;
  /// Test hook: corrupts single and paired EP instances after generation.
  bool inject_fault = false;
  PerturbationSpec perturbation{};
  /// E_delta threshold for sequence studies.
  double delta = 0.1;
  Index sequence_length = 50;
};

/// All verifier ids, in suite order.
const std::vector<std::string>& theorem_ids();

/// Default generator parameters used by the suite for `theorem_id`.
GeneratorSpec default_spec(std::string_view theorem_id, std::uint64_t seed);

/// Throws UnknownTheorem, InvalidSpec; generator errors propagate.
TheoremVerdict run_theorem_check(std::string_view theorem_id, const GeneratorSpec& spec, std::size_t trials,
                                 const ToleranceConfig& tol = {}, const RunOptions& options = {});

struct SuiteResult {
  std::vector<TheoremVerdict> verdicts;

  bool passed() const;
};

/// Every verifier at its default spec.
SuiteResult run_suite(std::uint64_t seed, std::size_t trials, const ToleranceConfig& tol = {},
                      const RunOptions& options = {});

}  // namespace epkit
