// Acceptance criteria: one PASS/FAIL line each, nonzero exit if any fails.
// Expected values come from the oracles in tests/support where an
// independent computation is available.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "epkit/classify.hpp"
#include "epkit/harness.hpp"
#include "epkit/models.hpp"
#include "epkit/pinv.hpp"
#include "epkit/sequence.hpp"
#include "epkit/subspace.hpp"
#include "epkit_cli/cli.hpp"
#include "epkit_cli/io.hpp"
#include "oracles.hpp"

using namespace epkit;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Index pick(MatrixGenerator& g, Index lo, Index hi) {
  return std::min(hi, lo + static_cast<Index>(g.uniform(0.0, static_cast<double>(hi - lo + 1))));
}

double norm2(const ComplexMatrix& m) { return oracle::spectral_norm(m.dense()); }

// 1. Penrose equations and the generalized-inverse identities.
Outcome penrose_suite() {
  Outcome o;
  MatrixGenerator g(mix_seed(kSeed, 1));
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Index rows = pick(g, 1, 32);
    const Index cols = pick(g, 1, 32);
    const Index k = pick(g, 0, std::min(rows, cols));
    const ComplexMatrix m = g.ranked(rows, cols, k, 100.0);
    const ComplexMatrix x = pseudoinverse(m);
    const double bound = 1e-10 * (1.0 + norm2(m));
    const double r = oracle::penrose(m.dense(), x.dense()).max();
    worst = std::max(worst, r / bound);
    o.check(r <= bound, "Penrose residual " + fmt("%.3e", r) + " at matrix " + std::to_string(i));
    o.check(oracle::rank(m.dense()) == k, "rank oracle disagrees at matrix " + std::to_string(i));
    o.check(mp_identity_suite(m).pass, "identity suite failed at matrix " + std::to_string(i));
  }
  if (o.pass) o.detail = "500 matrices, worst residual/bound " + fmt("%.2e", worst);
  return o;
}

// 2. EP iff T^+ T = T T^+, against an oracle pseudoinverse.
Outcome commutator_equivalence() {
  Outcome o;
  MatrixGenerator g(mix_seed(kSeed, 2));
  std::size_t misses = 0;
  for (int i = 0; i < 2000; ++i) {
    const bool want_ep = i % 2 == 0;
    const Index rank = pick(g, 1, 7);
    const ComplexMatrix t = want_ep ? g.ep(8, rank, 100.0) : g.non_ep(8, rank, 100.0);
    const DenseMatrix x = oracle::pseudoinverse(t.dense());
    const double comm = oracle::spectral_norm(oracle::product(x, t.dense()) - oracle::product(t.dense(), x));
    const bool ep = is_ep(t);
    if (ep != want_ep || ep != (comm <= 1e-8)) ++misses;
  }
  o.check(misses == 0, std::to_string(misses) + " misclassifications");
  if (o.pass) o.detail = "1000 EP + 1000 non-EP, 0 misclassifications";
  return o;
}

// 3. Pseudoinverse and reduced minimum modulus of direct sums.
Outcome direct_sums() {
  Outcome o;
  MatrixGenerator g(mix_seed(kSeed, 3));
  for (int i = 0; i < 200; ++i) {
    const Index ra = pick(g, 1, 10), ca = pick(g, 1, 10);
    const Index rb = pick(g, 1, 10), cb = pick(g, 1, 10);
    const ComplexMatrix a = g.ranked(ra, ca, pick(g, 1, std::min(ra, ca)), 100.0);
    const ComplexMatrix b = g.ranked(rb, cb, pick(g, 1, std::min(rb, cb)), 100.0);
    const ComplexMatrix s = direct_sum(a, b);
    const double err = norm2(pseudoinverse(s) - direct_sum(pseudoinverse(a), pseudoinverse(b)));
    o.check(err <= 1e-10 * (1.0 + norm2(a) + norm2(b)), "pinv mismatch " + fmt("%.3e", err));
    const double want = std::min(1.0 / norm2(ComplexMatrix(oracle::pseudoinverse(a.dense()))),
                                 1.0 / norm2(ComplexMatrix(oracle::pseudoinverse(b.dense()))));
    const double gap = std::abs(reduced_min_modulus(s) - std::min(reduced_min_modulus(a), reduced_min_modulus(b)));
    o.check(gap <= 1e-12, "gamma mismatch " + fmt("%.3e", gap));
    o.check(std::abs(reduced_min_modulus(s) - want) <= 1e-8 * (1.0 + want), "gamma disagrees with oracle");
  }
  if (o.pass) o.detail = "200 pairs";
  return o;
}

// 4. gamma(T) <= r(T) for EP matrices; the nilpotent cell violates it.
Outcome spectral_bound() {
  Outcome o;
  MatrixGenerator g(mix_seed(kSeed, 4));
  double margin = INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const Index dim = pick(g, 4, 16);
    const ComplexMatrix t = g.ep(dim, pick(g, 1, dim), 1e3);
    const ClassificationReport c = classify(t);
    o.check(c.is_ep, "EP instance " + std::to_string(i) + " classified non-EP");
    o.check(c.gamma <= c.spectral_radius + 1e-10, "gamma > r at instance " + std::to_string(i));
    margin = std::min(margin, c.spectral_radius - c.gamma);
  }
  const ClassificationReport j = classify(ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}));
  o.check(!j.is_ep && j.gamma == 1.0 && j.spectral_radius == 0.0, "nilpotent control not confirmed");
  o.check(oracle::gelfand_radius(ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}).dense()) == 0.0,
          "oracle radius of nilpotent control nonzero");
  if (o.pass) o.detail = "1000 EP instances, min r - gamma " + fmt("%.3e", margin) + "; control gamma 1 > r 0";
  return o;
}

// 5. Truncated harmonic diagonals and the unbounded pseudoinverses.
Outcome harmonic_model() {
  Outcome o;
  const LimitStudy s = limit_study(ModelFamilyId::diag_harmonic_truncated, 50);
  o.check(s.rows.size() == 50, "expected 50 rows");
  for (const LimitStudyRow& row : s.rows) {
    const double n = static_cast<double>(row.n);
    o.check(row.is_ep, "T_" + std::to_string(row.n) + " not EP");
    o.check(std::abs(row.gamma - 1.0 / n) <= 1e-14, "gamma off at n=" + std::to_string(row.n));
    o.check(std::abs(row.pinv_norm - n) <= 1e-12, "||T^+|| off at n=" + std::to_string(row.n));
  }
  const TheoremVerdict v = run_theorem_check("thm1.5", default_spec("thm1.5", 1), 10);
  o.check(v.passed(), "sequence verifier failed");
  o.check(v.metrics.at("harmonic_pinv_bounded") == 0.0, "harmonic pseudoinverses reported bounded");
  o.check(v.metrics.at("harmonic_pinv_converges") == 0.0, "harmonic pseudoinverses reported convergent");
  o.check(v.metrics.at("harmonic_sup_pinv_norm") == 50.0, "sup ||T_n^+|| != 50");
  if (o.pass) o.detail = "n=1..50 EP, gamma=1/n, ||T^+||=n; sup unbounded, T_n^+ diverges";
  return o;
}

// 6. Limits of norm-convergent sequences in E_delta.
Outcome e_delta_limits() {
  Outcome o;
  const double delta = 0.1;
  double worst = INFINITY;
  for (int i = 0; i < 50; ++i) {
    MatrixGenerator g(mix_seed(kSeed, 600 + static_cast<std::uint64_t>(i)));
    const Index dim = pick(g, 3, 12);
    const MatrixSequence seq = g.sequence(dim, pick(g, 1, dim), 10.0, SequenceKind::e_delta, 50, delta);
    for (const ComplexMatrix& t : seq.terms) {
      o.check(is_ep(t) && reduced_min_modulus(t) >= delta, "term outside E_delta in sequence " + std::to_string(i));
    }
    const SequenceStudy st = study_sequence(seq);
    o.check(st.terms_converge, "sequence " + std::to_string(i) + " does not converge");
    o.check(is_ep(seq.limit), "limit " + std::to_string(i) + " not EP");
    const double gamma = 1.0 / oracle::spectral_norm(oracle::pseudoinverse(seq.limit.dense()));
    o.check(gamma >= delta - 1e-9, "limit gamma " + fmt("%.6f", gamma));
    worst = std::min(worst, gamma);
  }
  if (o.pass) o.detail = "50 sequences, min limit gamma " + fmt("%.4f", worst);
  return o;
}

// 7. Ranges of fractional powers of |T|.
Outcome fractional_ranges() {
  Outcome o;
  MatrixGenerator g(mix_seed(kSeed, 7));
  const double alphas[] = {0.25, 0.5, 1.5, 3.0};
  double worst = 0.0;
  std::size_t ep_count = 0;
  for (int i = 0; i < 200; ++i) {
    const Index dim = pick(g, 2, 12);
    const Index rank = pick(g, 1, dim - 1);
    const bool want_ep = i % 2 == 0;
    const ComplexMatrix t = want_ep ? g.ep(dim, rank, 100.0) : g.non_ep(dim, rank, 100.0);
    const double alpha = alphas[i % 4];
    const ComplexMatrix modulus = polar_decomposition(t).modulus_part;
    const OrthonormalBasis r_mod = range_basis(modulus);
    const OrthonormalBasis r_pow = range_basis(fractional_abs_power(t, alpha));
    const OrthonormalBasis r_t = range_basis(t);
    const double d = projector_distance(r_pow, r_mod);
    const double d_oracle = oracle::spectral_norm(
        oracle::projector(oracle::gram_schmidt(fractional_abs_power(t, alpha).dense())) -
        oracle::projector(oracle::gram_schmidt(adjoint(t).dense())));
    worst = std::max({worst, d, d_oracle});
    o.check(d <= 1e-8 && d_oracle <= 1e-8, "R(|T|^a) != R(|T|) at instance " + std::to_string(i));
    const bool ranges_equal = projector_distance(r_t, r_mod) <= 1e-8;
    o.check(ranges_equal == is_ep(t), "converse disagrees at instance " + std::to_string(i));
    o.check(ranges_equal == want_ep, "range test disagrees with construction at " + std::to_string(i));
    if (want_ep) {
      ++ep_count;
      o.check(projector_distance(r_pow, r_t) <= 1e-8, "R(|T|^a) != R(T) for EP instance " + std::to_string(i));
    }
  }
  if (o.pass) {
    o.detail = "200 instances (" + std::to_string(ep_count) + " EP), worst distance " + fmt("%.2e", worst);
  }
  return o;
}

// 8. EP-ness survives dominated perturbations.
Outcome perturbations() {
  Outcome o;
  const PerturbationSpec p{0.5, 0.5};
  std::size_t collapse = 0;
  for (int i = 0; i < 200; ++i) {
    MatrixGenerator g(mix_seed(kSeed, 800 + static_cast<std::uint64_t>(i)));
    const Index dim = pick(g, 2, 12);
    const MatrixPair pr = g.perturbation_pair(dim, pick(g, 1, dim), 100.0, p, static_cast<std::uint32_t>(i % 3));
    const ComplexMatrix& t = pr.first;
    const ComplexMatrix& s = pr.second;
    o.check(is_ep(t), "T not EP at pair " + std::to_string(i));
    const bool cert = psd_dominates(Complex(p.a * p.a) * (adjoint(t) * t), adjoint(s) * s) &&
                      psd_dominates(Complex(p.b * p.b) * (t * adjoint(t)), s * adjoint(s));
    o.check(cert, "domination certificate fails at pair " + std::to_string(i));
    const ComplexMatrix sum = t + s;
    o.check(is_ep(sum), "T+S not EP at pair " + std::to_string(i));
    if (is_hypo_ep(sum) == is_ep(sum)) ++collapse;
  }
  o.check(collapse == 200, "hypo-EP and EP disagree");
  if (o.pass) o.detail = "200 certified pairs, T+S EP; hypo-EP coincides with EP in all 200";
  return o;
}

// 9. Full CLI suite at seed 1, twice.
Outcome full_suite() {
  Outcome o;
  auto once = [](std::string& out) {
    const char* argv[] = {"epkit", "suite", "--seed", "1"};
    std::ostringstream os, es;
    const int code = cli::run(4, argv, os, es);
    out = os.str();
    return code;
  };
  std::string first, second;
  const int c1 = once(first);
  const int c2 = once(second);
  o.check(c1 == cli::kExitOk && c2 == cli::kExitOk, "suite exit code " + std::to_string(c1));
  o.check(first == second, "rerun not byte-identical");
  const auto report = io::report_file_from_json(io::json::parse(first));
  const auto& verdicts = std::get<SuiteResult>(report.payload).verdicts;
  std::vector<std::string> ids;
  for (const auto& v : verdicts) ids.push_back(v.theorem_id);
  o.check(ids == theorem_ids(), "suite does not cover every id");
  if (o.pass) o.detail = std::to_string(ids.size()) + " ids, exit 0, rerun byte-identical";
  return o;
}

struct Criterion {
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"Penrose suite", 30, penrose_suite},
      {"EP iff commuting pseudoinverse", 60, commutator_equivalence},
      {"direct sums", 0, direct_sums},
      {"gamma <= spectral radius", 0, spectral_bound},
      {"harmonic diagonal model", 5, harmonic_model},
      {"E_delta limits", 0, e_delta_limits},
      {"fractional ranges", 0, fractional_ranges},
      {"dominated perturbations", 0, perturbations},
      {"full suite", 300, full_suite},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.pass = false;
      o.detail += "; runtime " + fmt("%.1f", secs) + " s exceeds " + fmt("%.0f", c.limit_s) + " s";
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
