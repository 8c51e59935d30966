#include "epkit/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "epkit/classify.hpp"
#include "epkit/models.hpp"
#include "epkit/pinv.hpp"
#include "epkit/sequence.hpp"
#include "epkit/subspace.hpp"

namespace epkit {

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

std::uint64_t hash_id(std::string_view id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : id) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

enum class Role { none, accepting, rejecting };
enum class Fold { min, max };

/// One seeded trial: draws instances and records checks.
class Trial {
 public:
  Trial(std::size_t index, std::uint64_t seed, const GeneratorSpec& spec, const ToleranceConfig& tol,
        const RunOptions& options)
      : index(index), spec(spec), tol(tol), options(options), gen(seed, tol) {}

  const std::size_t index;
  const GeneratorSpec& spec;
  const ToleranceConfig& tol;
  const RunOptions& options;
  MatrixGenerator gen;

  bool failed = false;
  bool warned = false;
  std::string reason;
  double worst = 0.0;
  Role role = Role::none;
  std::vector<NamedMatrix> witnesses;
  std::map<std::string, std::pair<Fold, double>> metrics;

  void fail(const std::string& why) {
    if (!failed) {
      failed = true;
      reason = why;
    }
  }

  void require(bool ok, std::string_view why) {
    if (!ok) fail(std::string(why));
  }

  /// A quantity that should vanish, already scaled to be dimensionless.
  void residual(double v, std::string_view what) {
    if (!std::isfinite(v)) {
      fail(std::string(what) + " is not finite");
      return;
    }
    worst = std::max(worst, v);
    if (v > 10.0 * tol.eq_atol) {
      fail(std::string(what) + " residual " + sci(v));
    } else if (v > tol.eq_atol) {
      warned = true;
    }
  }

  /// Both sides of an equivalence; the left side decides the trial's role.
  void agree(bool lhs, bool rhs, std::string_view what) {
    role = lhs ? Role::accepting : Role::rejecting;
    if (lhs != rhs) {
      fail(std::string(what) + ": left side " + (lhs ? "holds" : "fails") + ", right side " +
           (rhs ? "holds" : "fails"));
    }
  }

  void witness(std::string name, const ComplexMatrix& m) { witnesses.push_back({std::move(name), m}); }

  void metric(const std::string& key, double v, Fold fold) {
    auto [it, inserted] = metrics.try_emplace(key, fold, v);
    if (!inserted) it->second.second = fold == Fold::min ? std::min(it->second.second, v) : std::max(it->second.second, v);
  }

  Index dim() const { return spec.dim; }
  Index rank() const { return spec.rank; }
  double cond() const { return spec.condition_bound; }
  /// Even trials draw EP instances, odd trials non-EP ones.
  bool wants_ep() const { return index % 2 == 0; }

  ComplexMatrix corrupt(const ComplexMatrix& m) const {
    if (!options.inject_fault || m.rows() < 2) return m;
    const SvdFactorization f = svd(m, tol);
    const Index n = m.rows();
    const double s = std::max(operator_norm(m), 1.0);
    DenseMatrix bump = DenseMatrix::Zero(n, n);
    if (f.numerical_rank == 0) {
      bump(0, 1) = s;
    } else if (f.numerical_rank < n) {
      // Maps a carrier vector into the null space.
      const DenseMatrix& v = f.right_vectors.dense();
      bump = s * v.col(n - 1) * v.col(0).adjoint();
    } else {
      return m;
    }
    return ComplexMatrix(m.dense() + bump);
  }

  ComplexMatrix ep(Index d, Index r) { return corrupt(gen.ep(d, r, cond())); }
  ComplexMatrix non_ep(Index d, Index r) { return gen.non_ep(d, std::clamp<Index>(r, 1, d - 1), cond()); }
  ComplexMatrix normal_ep(Index d, Index r) { return corrupt(gen.normal_ep(d, r, cond())); }

  /// Alternating EP / non-EP sample, checked against its family label.
  ComplexMatrix sample() {
    ComplexMatrix t = wants_ep() ? ep(dim(), rank()) : non_ep(dim(), rank());
    witness("T", t);
    return t;
  }

  void check_label(bool ep_now) {
    require(ep_now == wants_ep(), wants_ep() ? "EP-family instance classified non-EP"
                                             : "non-EP-family instance classified EP");
  }
};

double rel(double v, double scale) { return v / (1.0 + scale); }

double spectral_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return spectral_norm(a.dense() - b.dense());
}

/// Greedy nearest-pair matching distance between two multisets.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  while (!a.empty()) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        const double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    worst = std::max(worst, best);
    a.erase(a.begin() + static_cast<std::ptrdiff_t>(bi));
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Verifiers

void check_commutator(Trial& t) {
  const ComplexMatrix m = t.sample();
  const ClassificationReport c = classify(m, t.tol);
  t.check_label(c.is_ep);
  t.agree(c.is_ep, c.commutator_residual <= t.tol.eq_atol, "EP <=> T^+T = TT^+");
  if (c.is_ep) t.residual(c.commutator_residual, "||T^+T - TT^+||");
}

void check_direct_sum(Trial& t) {
  const Index d1 = t.dim() / 2;
  const Index d2 = t.dim() - d1;
  const std::size_t mode = t.index % 4;
  const bool ep1 = (mode & 1U) == 0 || d1 < 2;
  const bool ep2 = (mode & 2U) == 0 || d2 < 2;
  const Index r1 = std::clamp<Index>(
      static_cast<Index>(std::lround(static_cast<double>(t.rank() * d1) / static_cast<double>(t.dim()))), 0, d1);
  const Index r2 = std::clamp<Index>(t.rank() - r1, 0, d2);
  const ComplexMatrix a = ep1 ? t.ep(d1, r1) : t.non_ep(d1, r1);
  const ComplexMatrix b = ep2 ? t.ep(d2, r2) : t.non_ep(d2, r2);
  const ComplexMatrix s = direct_sum(a, b);
  t.witness("T1", a);
  t.witness("T2", b);

  const bool lhs = is_ep(a, t.tol) && is_ep(b, t.tol);
  t.require(lhs == (ep1 && ep2), "block instance does not match its generator family");
  t.agree(lhs, is_ep(s, t.tol), "T1, T2 EP <=> T1 (+) T2 EP");

  const ComplexMatrix sp = pseudoinverse(s, t.tol);
  const ComplexMatrix blocks = direct_sum(pseudoinverse(a, t.tol), pseudoinverse(b, t.tol));
  t.residual(rel(spectral_distance(sp, blocks), operator_norm(sp)), "(T1 (+) T2)^+ - T1^+ (+) T2^+");

  std::vector<double> gammas;
  for (const ComplexMatrix* m : {&a, &b}) {
    const double g = reduced_min_modulus(*m, t.tol);
    if (g > 0.0) gammas.push_back(g);
  }
  const double expected = gammas.empty() ? 0.0 : *std::min_element(gammas.begin(), gammas.end());
  t.residual(rel(std::abs(reduced_min_modulus(s, t.tol) - expected), operator_norm(s)),
             "gamma(T1 (+) T2) - min gamma");
}

void check_polar(Trial& t) {
  const ComplexMatrix m = t.sample();
  const SvdFactorization f = svd(m, t.tol);
  const PolarFactors p = polar_decomposition(f);
  t.witness("U_T", p.isometry_part);
  const bool ep = is_ep(f, t.tol);
  t.check_label(ep);
  t.agree(ep, is_ep(p.isometry_part, t.tol), "T EP <=> U_T EP");

  const double norm = operator_norm(m);
  t.residual(rel(spectral_distance(p.isometry_part * p.modulus_part, m), norm), "U_T |T| - T");
  const ComplexMatrix& u = p.isometry_part;
  t.residual(spectral_distance(u * adjoint(u) * u, u), "U U* U - U");
}

void check_range_carrier(Trial& t) {
  const ComplexMatrix m = t.sample();
  const SvdFactorization f = svd(m, t.tol);
  const bool ep = is_ep(f, t.tol);
  t.check_label(ep);

  // Carrier obtained independently as R(T*T).
  const OrthonormalBasis range = range_basis(f);
  const OrthonormalBasis carrier = range_basis(adjoint(m) * m, t.tol);
  t.agree(ep, subspace_eq(range, carrier, t.tol), "T EP <=> R(T) = N(T)^perp");

  const OrthonormalBasis c = carrier_basis(f);
  t.residual(projector_distance(c, carrier), "N(T)^perp vs R(T*T)");
  if (range.is_empty()) return;
  // The restriction T1 : carrier -> range is invertible with minimum modulus gamma.
  const DenseMatrix block = range.vectors().adjoint() * m.dense() * c.vectors();
  const double norm = operator_norm(m);
  const Eigen::JacobiSVD<DenseMatrix> sv(block);
  const double smin = sv.singularValues()(sv.singularValues().size() - 1);
  t.residual(rel(std::abs(smin - reduced_min_modulus(f)), norm), "sigma_min(T1) - gamma(T)");
  t.residual(rel(spectral_norm(range.vectors() * block * c.vectors().adjoint() - m.dense()), norm),
             "T1 block form - T");
}

void check_commuting(Trial& t) {
  const std::uint32_t kind = static_cast<std::uint32_t>(t.index % 3);
  MatrixPair pair = t.gen.commuting_pair(t.dim(), t.rank(), t.cond(), kind);
  const ComplexMatrix m = t.corrupt(pair.first);
  const ComplexMatrix& s = pair.second;
  t.witness("T", m);
  t.witness("S", s);
  t.require(is_ep(m, t.tol), "T is not EP");

  const ComplexMatrix mp = pseudoinverse(m, t.tol);
  const double ns = operator_norm(s);
  const double c1 = rel(spectral_norm(s.dense() * m.dense() - m.dense() * s.dense()), ns * operator_norm(m));
  const double c2 = rel(spectral_norm(s.dense() * mp.dense() - mp.dense() * s.dense()), ns * operator_norm(mp));
  const bool lhs = c1 <= t.tol.eq_atol;
  t.require(lhs == (kind != 2), kind != 2 ? "commuting construction does not commute"
                                          : "control partner commutes with T");
  t.agree(lhs, c2 <= t.tol.eq_atol, "ST = TS <=> ST^+ = T^+S");
  if (lhs) t.residual(std::max(c1, c2), "commutator");
}

void check_powers(Trial& t) {
  const ComplexMatrix m = t.sample();
  const SvdFactorization f = svd(m, t.tol);
  const bool ep = is_ep(f, t.tol);
  t.check_label(ep);
  const OrthonormalBasis range = range_basis(f);
  bool all_agree = true;
  for (int n = 2; n <= 4; ++n) {
    const ComplexMatrix mn = power(m, n);
    const SvdFactorization fn = svd(mn, t.tol);
    const OrthonormalBasis range_n = range_basis(fn);
    const bool rhs = is_ep(fn, t.tol) && subspace_eq(range_n, range, t.tol);
    if (ep != rhs) {
      all_agree = false;
      t.witness("T^" + std::to_string(n), mn);
    }
    if (ep) t.residual(projector_distance(range_n, range), "R(T^" + std::to_string(n) + ") vs R(T)");
  }
  t.role = ep ? Role::accepting : Role::rejecting;
  if (!all_agree) t.fail("T EP <=> T^n EP with R(T^n) = R(T) disagrees for some n in {2, 3, 4}");
}

void check_spectrum(Trial& t) {
  const bool normal = t.index % 2 == 1;
  const ComplexMatrix m = normal ? t.normal_ep(t.dim(), t.rank()) : t.ep(t.dim(), t.rank());
  t.witness("T", m);
  const SvdFactorization f = svd(m, t.tol);
  t.require(is_ep(f, t.tol), "T is not EP");
  const Index k = f.numerical_rank;
  const double norm = operator_norm(m);

  const std::vector<Complex> eig = eigenvalues(m, t.tol);
  const std::vector<Complex> nonzero(eig.begin(), eig.begin() + k);
  double zero_part = 0.0;
  for (auto it = eig.begin() + k; it != eig.end(); ++it) zero_part = std::max(zero_part, std::abs(*it));
  t.residual(rel(zero_part, norm), "eigenvalues on N(T)");
  if (k == 0) return;

  const OrthonormalBasis c = carrier_basis(f);
  const ComplexMatrix block(c.vectors().adjoint() * m.dense() * c.vectors());
  t.residual(rel(multiset_distance(nonzero, eigenvalues(block, t.tol)), norm),
             "spectrum of T on its carrier vs nonzero spectrum of T");

  const double gamma = reduced_min_modulus(f);
  const Eigen::JacobiSVD<DenseMatrix> sv(block.dense());
  const double smin = sv.singularValues()(k - 1);
  t.residual(rel(std::abs(smin - gamma), norm), "sigma_min(T1) - gamma(T)");
  double min_mod = std::numeric_limits<double>::infinity();
  for (const Complex& l : nonzero) min_mod = std::min(min_mod, std::abs(l));
  t.residual(rel(std::max(0.0, gamma - min_mod), norm), "gamma(T) - min nonzero |lambda|");
  t.metric("min_nonzero_eigenvalue_over_gamma", min_mod / gamma, Fold::min);
}

void check_product(Trial& t) {
  // Kinds: shared range (expected EP), invertible S, independent S.
  static constexpr std::array<std::uint32_t, 3> kVariant{1, 2, 0};
  const std::size_t kind = t.index % 3;
  MatrixPair pair = t.gen.product_pair(t.dim(), t.rank(), t.cond(), kVariant[kind]);
  const ComplexMatrix m = t.corrupt(pair.first);
  const ComplexMatrix& s = pair.second;
  t.witness("T", m);
  t.witness("S", s);
  t.require(is_ep(m, t.tol), "T is not EP");

  const ComplexMatrix p = s * m;
  const SvdFactorization fp = svd(p, t.tol);
  const SvdFactorization fm = svd(m, t.tol);
  const bool lhs = is_ep(fp, t.tol);
  if (kind == 0) t.require(lhs, "shared-range product is not EP");
  const bool rhs = subspace_eq(range_basis(fp), range_basis(fm), t.tol) &&
                   subspace_eq(null_basis(fp), null_basis(fm), t.tol);
  t.agree(lhs, rhs, "ST EP <=> R(ST) = R(T) and N(ST) = N(T)");
}

void check_fractional(Trial& t) {
  static constexpr std::array<double, 6> kAlphas{0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
  const ComplexMatrix m = t.sample();
  const SvdFactorization f = svd(m, t.tol);
  const bool ep = is_ep(f, t.tol);
  t.check_label(ep);
  t.role = ep ? Role::accepting : Role::rejecting;

  const PolarFactors p = polar_decomposition(f);
  const OrthonormalBasis r_abs = range_basis(p.modulus_part, t.tol);
  const OrthonormalBasis range = range_basis(f);
  t.residual(projector_distance(r_abs, carrier_basis(f)), "R(|T|) vs N(T)^perp");
  for (double alpha : kAlphas) {
    const OrthonormalBasis r_alpha = range_basis(fractional_abs_power(m, alpha, t.tol), t.tol);
    t.residual(projector_distance(r_alpha, r_abs), "R(|T|^" + sci(alpha) + ") vs R(|T|)");
    if (ep) t.residual(projector_distance(r_alpha, range), "R(|T|^" + sci(alpha) + ") vs R(T)");
  }
}

void check_modulus_range(Trial& t) {
  const ComplexMatrix m = t.sample();
  const SvdFactorization f = svd(m, t.tol);
  const bool ep = is_ep(f, t.tol);
  t.check_label(ep);
  const OrthonormalBasis range = range_basis(f);
  bool rhs = subspace_eq(range, range_basis(polar_decomposition(f).modulus_part, t.tol), t.tol);
  for (double alpha : {0.25, 0.5}) {
    rhs = rhs && subspace_eq(range, range_basis(fractional_abs_power(m, alpha, t.tol), t.tol), t.tol);
  }
  t.agree(ep, rhs, "T EP <=> R(T) = R(|T|) = R(|T|^alpha)");
}

void check_perturbation(Trial& t) {
  const std::uint32_t kind = static_cast<std::uint32_t>(t.index % 3);
  const PerturbationSpec& ps = t.options.perturbation;
  MatrixPair pair = t.gen.perturbation_pair(t.dim(), t.rank(), t.cond(), ps, kind);
  const ComplexMatrix m = t.corrupt(pair.first);
  const ComplexMatrix& s = pair.second;
  t.witness("T", m);
  t.witness("S", s);
  t.require(is_ep(m, t.tol), "T is not EP");
  t.require(is_ep(s, t.tol), "S is not EP");
  if (kind == 2) t.require(is_normal(m, t.tol) && is_normal(s, t.tol), "normal pair is not normal");

  const ComplexMatrix ms = adjoint(m);
  const ComplexMatrix ss = adjoint(s);
  const bool dom_a = psd_dominates(Complex(ps.a * ps.a) * (ms * m), ss * s, t.tol);
  const bool dom_b = psd_dominates(Complex(ps.b * ps.b) * (m * ms), s * ss, t.tol);
  t.require(dom_a && dom_b, "domination certificate failed");
  if (!(dom_a && dom_b)) t.metric("certificate_failures", 1.0, Fold::max);

  const ComplexMatrix sum = m + s;
  t.witness("T+S", sum);
  const SvdFactorization fs = svd(sum, t.tol);
  const SvdFactorization fm = svd(m, t.tol);
  t.require(is_hypo_ep(sum, t.tol), "T + S is not hypo-EP");
  t.require(is_ep(fs, t.tol), "T + S is not EP");
  t.residual(projector_distance(null_basis(fs), null_basis(fm)), "N(T+S) vs N(T)");
  t.residual(projector_distance(range_basis(fs), range_basis(fm)), "R(T+S) vs R(T)");
}

void check_pinv_residuals(Trial& t) {
  const ComplexMatrix m = t.sample();
  const ComplexMatrix ms = adjoint(m);
  const DenseMatrix id = DenseMatrix::Identity(m.rows(), m.cols());
  const ComplexMatrix mp = pseudoinverse(m, t.tol);
  const ComplexMatrix msp = pseudoinverse(ms, t.tol);
  const double norm = operator_norm(m);
  const double r1 = rel(spectral_norm(m.dense() * (id - m.dense() * mp.dense())), norm);
  const double r2 = rel(spectral_norm(ms.dense() * (id - ms.dense() * msp.dense())), norm);
  const bool ep = is_ep(m, t.tol);
  t.check_label(ep);
  t.agree(ep, r1 <= t.tol.eq_atol && r2 <= t.tol.eq_atol, "T EP <=> T(I - TT^+) = 0 = T*(I - T*T*^+)");
  if (ep) t.residual(std::max(r1, r2), "T(I - TT^+), T*(I - T*T*^+)");
}

void check_sequences(Trial& t) {
  static constexpr std::array<SequenceKind, 5> kKinds{SequenceKind::scaled, SequenceKind::geometric,
                                                      SequenceKind::in_range, SequenceKind::off_range,
                                                      SequenceKind::harmonic};
  const SequenceKind kind = kKinds[t.index % kKinds.size()];
  const MatrixSequence seq =
      t.gen.sequence(t.dim(), t.rank(), t.cond(), kind, t.options.sequence_length, t.options.delta);
  t.witness("limit", seq.limit);
  t.witness("last_term", seq.terms.back());
  const SequenceStudy st = study_sequence(seq, t.tol);

  t.require(st.terms_converge, "T_k does not converge to T");
  t.require(st.conditions_agree(), "T_k^+ -> T^+, T_k^+T_k -> T^+T and sup ||T_k^+|| < inf disagree");
  t.require(st.pinv_converges == seq.expect_convergent, seq.expect_convergent
                                                            ? "T_k^+ fails to converge on a convergent family"
                                                            : "T_k^+ converges on a divergent family");
  t.role = st.pinv_converges ? Role::accepting : Role::rejecting;

  const std::string name(to_string(kind));
  t.metric(name + "_sup_pinv_norm", st.sup_pinv_norm, Fold::max);
  if (kind == SequenceKind::geometric) {
    t.require(st.pinv_below_tol_from.has_value(), "geometric sequence never reaches the convergence tolerance");
    if (st.pinv_below_tol_from) {
      t.metric("geometric_pinv_below_tol_from", static_cast<double>(*st.pinv_below_tol_from), Fold::max);
    }
  }
}

void check_e_delta(Trial& t) {
  const double delta = t.options.delta;
  const MatrixSequence seq = t.gen.sequence(t.dim(), std::max<Index>(t.rank(), 1), t.cond(), SequenceKind::e_delta,
                                            t.options.sequence_length, delta);
  t.witness("limit", seq.limit);
  for (std::size_t k = 0; k < seq.terms.size(); ++k) {
    const SvdFactorization f = svd(seq.terms[k], t.tol);
    if (!is_ep(f, t.tol) || reduced_min_modulus(f) < delta) {
      t.witness("T_k", seq.terms[k]);
      t.fail("term " + std::to_string(k + 1) + " leaves E_delta");
      break;
    }
  }

  const SequenceStudy st = study_sequence(seq, t.tol);
  t.require(st.term_error.back() <= 1e-9, "||T_K - T|| above 1e-9");
  const SvdFactorization fl = svd(seq.limit, t.tol);
  t.require(is_ep(fl, t.tol), "limit is not EP");
  const double gamma = reduced_min_modulus(fl);
  t.require(gamma >= delta - 1e-9, "gamma(limit) below delta");
  t.metric("min_limit_gamma", gamma, Fold::min);
  t.require(st.pinv_converges && st.projector_converges && st.pinv_bounded, "T_k^+ does not converge");
  t.require(st.sup_pinv_norm <= (1.0 + 1e-9) / delta, "sup ||T_k^+|| exceeds 1/delta");

  // ||T^+T - TT^+|| <= 2||T^+|| ||T - T_K|| + 2||T_K|| ||T_K^+ - T^+||.
  const ComplexMatrix& last = seq.terms.back();
  const ComplexMatrix lp = pseudoinverse(fl);
  const double comm = spectral_norm(lp.dense() * seq.limit.dense() - seq.limit.dense() * lp.dense());
  const double bound = 2.0 * operator_norm(lp) * st.term_error.back() + 2.0 * operator_norm(last) * st.pinv_error.back();
  t.residual(std::max(0.0, comm - bound), "commutator above its sequence bound");
}

void check_spectral_bound(Trial& t) {
  const bool normal = t.index % 2 == 1;
  const ComplexMatrix m = normal ? t.normal_ep(t.dim(), t.rank()) : t.ep(t.dim(), t.rank());
  t.witness("T", m);
  const SvdFactorization f = svd(m, t.tol);
  t.require(is_ep(f, t.tol), "T is not EP");
  const double gamma = reduced_min_modulus(f);
  const double radius = spectral_radius(m, t.tol);
  const double norm = operator_norm(m);
  t.residual(rel(std::max(0.0, gamma - radius), norm), "gamma(T) - r(T)");
  if (gamma > 0.0) t.metric("min_radius_over_gamma", radius / gamma, Fold::min);

  for (int n = 2; n <= 3; ++n) {
    const ComplexMatrix mn = power(m, n);
    const double bound = std::pow(norm, n - 1) * gamma;
    t.residual(rel(std::max(0.0, reduced_min_modulus(mn, t.tol) - bound), std::pow(norm, n)),
               "gamma(T^" + std::to_string(n) + ") above ||T||^(n-1) gamma(T)");
  }
  const ComplexMatrix mp = pseudoinverse(f);
  t.residual(rel(spectral_distance(pseudoinverse(m * m, t.tol), mp * mp), std::pow(operator_norm(mp), 2)),
             "(T^2)^+ - (T^+)^2");
}

// ---------------------------------------------------------------------------
// Verdict-level controls

void finalize_sequences(TheoremVerdict& v, const ToleranceConfig& tol, const RunOptions& o) {
  MatrixGenerator gen(0, tol);
  const MatrixSequence h = gen.sequence(1, 1, 1.0, SequenceKind::harmonic, o.sequence_length, o.delta);
  const SequenceStudy st = study_sequence(h, tol);
  v.metrics["harmonic_sup_pinv_norm"] = st.sup_pinv_norm;
  v.metrics["harmonic_pinv_converges"] = st.pinv_converges ? 1.0 : 0.0;
  v.metrics["harmonic_pinv_bounded"] = st.pinv_bounded ? 1.0 : 0.0;
  if (st.pinv_converges || st.pinv_bounded || !st.terms_converge) {
    v.configuration_error = "harmonic control sequence did not behave as a divergent control";
  }
  v.notes.emplace_back(
      "finite window: an error curve converges when its last value is below 1e-9 or at most 0.75 of its "
      "midpoint value");
  v.notes.emplace_back("the T_k^+ -> T^+ direction is checked against the limit's pseudoinverse");
}

void finalize_e_delta(TheoremVerdict& v, const ToleranceConfig& tol, const RunOptions& o) {
  v.metrics["delta"] = o.delta;
  for (Index n = 1; n <= kMaxDimension; ++n) {
    if (reduced_min_modulus(realize(ModelFamilyId::diag_harmonic_truncated, n), tol) < o.delta) {
      v.metrics["harmonic_exits_e_delta_at"] = static_cast<double>(n);
      break;
    }
  }
}

void finalize_spectral_bound(TheoremVerdict& v, const ToleranceConfig& tol, const RunOptions&) {
  const ComplexMatrix j = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
  const ClassificationReport c = classify(j, tol);
  const bool excluded = !c.is_ep && c.gamma > c.spectral_radius;
  v.metrics["nilpotent_gamma"] = c.gamma;
  v.metrics["nilpotent_spectral_radius"] = c.spectral_radius;
  v.metrics["nilpotent_control_excluded"] = excluded ? 1.0 : 0.0;
  if (!excluded) v.configuration_error = "nilpotent control [[0,1],[0,0]] was not excluded as non-EP";
  v.notes.emplace_back("control: [[0,1],[0,0]] is non-EP with gamma = 1 > r = 0");
}

void finalize_powers(TheoremVerdict& v, const ToleranceConfig&, const RunOptions&) {
  v.notes.emplace_back(
      "for a fixed power the range condition R(T^n) = R(T) is required: [[0,1],[0,0]] is non-EP while its "
      "square is 0, which is EP");
}

void finalize_product(TheoremVerdict& v, const ToleranceConfig&, const RunOptions&) {
  v.notes.emplace_back(
      "the forward direction needs rank(ST) = rank(T): S = diag(1,1,0), T = diag(0,1,1) gives an EP product "
      "with R(ST) != R(T)");
  v.notes.emplace_back("the adjoint-representation hypothesis is automatic for matrices and is not checked");
}

void finalize_perturbation(TheoremVerdict& v, const ToleranceConfig&, const RunOptions& o) {
  v.metrics.try_emplace("certificate_failures", 0.0);
  v.metrics["a"] = o.perturbation.a;
  v.metrics["b"] = o.perturbation.b;
  v.notes.emplace_back("in finite dimension hypo-EP coincides with EP, so both conclusions are checked");
}

// ---------------------------------------------------------------------------

struct Entry {
  std::string_view id;
  bool equivalence;
  bool needs_non_ep;
  double default_condition;
  void (*trial)(Trial&);
  void (*finalize)(TheoremVerdict&, const ToleranceConfig&, const RunOptions&);
};

const std::array<Entry, 15>& registry() {
  static const std::array<Entry, 15> entries{{
      {"thm1.5", true, false, 100.0, check_sequences, finalize_sequences},
      {"thm2.1", true, true, 100.0, check_commutator, nullptr},
      {"thm2.2", true, true, 100.0, check_direct_sum, nullptr},
      {"thm2.3", true, true, 100.0, check_polar, nullptr},
      {"thm2.4", true, true, 100.0, check_range_carrier, nullptr},
      {"thm2.5", true, false, 100.0, check_commuting, nullptr},
      {"thm2.6", true, true, 10.0, check_powers, finalize_powers},
      {"thm2.7", false, false, 100.0, check_spectrum, nullptr},
      {"thm2.12", true, false, 100.0, check_product, finalize_product},
      {"thm2.13", false, true, 100.0, check_fractional, nullptr},
      {"thm2.15", true, true, 100.0, check_modulus_range, nullptr},
      {"thm2.16", false, false, 100.0, check_perturbation, finalize_perturbation},
      {"thm2.19", true, true, 100.0, check_pinv_residuals, nullptr},
      {"thm3.2", false, false, 10.0, check_e_delta, finalize_e_delta},
      {"thm3.4", false, false, 1000.0, check_spectral_bound, finalize_spectral_bound},
  }};
  return entries;
}

const Entry& find_entry(std::string_view id) {
  for (const Entry& e : registry()) {
    if (e.id == id) return e;
  }
  throw UnknownTheorem("unknown theorem id '" + std::string(id) + "'");
}

}  // namespace

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const Entry& e : registry()) out.emplace_back(e.id);
    return out;
  }();
  return ids;
}

GeneratorSpec default_spec(std::string_view theorem_id, std::uint64_t seed) {
  const Entry& e = find_entry(theorem_id);
  GeneratorSpec spec;
  spec.dim = 8;
  spec.rank = 6;
  spec.condition_bound = e.default_condition;
  spec.seed = seed;
  return spec;
}

TheoremVerdict run_theorem_check(std::string_view theorem_id, const GeneratorSpec& spec, std::size_t trials,
                                 const ToleranceConfig& tol, const RunOptions& options) {
  const Entry& entry = find_entry(theorem_id);
  tol.validate();
  options.perturbation.validate();
  GeneratorSpec checked = spec;
  checked.family = Family::ep;
  checked.validate();
  if (entry.needs_non_ep && spec.dim < 2) {
    throw InvalidSpec(std::string(theorem_id) + " needs dim >= 2 to draw non-EP instances");
  }
  if (!(options.delta > 0.0)) throw InvalidSpec("delta must be positive");
  if (options.sequence_length < 2) throw InvalidSpec("sequence length must be at least 2");

  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t base = mix_seed(spec.seed, hash_id(theorem_id));

  std::vector<std::optional<Trial>> results(trials);
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < trials; i = next++) {
      try {
        results[i].emplace(i, mix_seed(base, i), checked, tol, options);
        entry.trial(*results[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(trials)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  TheoremVerdict v;
  v.theorem_id = std::string(theorem_id);
  v.trials = trials;
  v.equivalence = entry.equivalence;
  std::map<std::string, std::pair<Fold, double>> folded;
  for (const auto& r : results) {
    const Trial& t = *r;
    if (t.failed) {
      ++v.failures;
      if (!v.counterexample) v.counterexample = Counterexample{t.index, t.reason, t.witnesses};
    } else if (t.warned) {
      ++v.warnings;
    }
    if (t.role == Role::accepting) ++v.accepting;
    if (t.role == Role::rejecting) ++v.rejecting;
    v.worst_residual = std::max(v.worst_residual, t.worst);
    for (const auto& [key, value] : t.metrics) {
      auto [it, inserted] = folded.try_emplace(key, value);
      if (!inserted) {
        double& acc = it->second.second;
        acc = value.first == Fold::min ? std::min(acc, value.second) : std::max(acc, value.second);
      }
    }
  }
  for (const auto& [key, value] : folded) v.metrics[key] = value.second;
  if (entry.finalize) entry.finalize(v, tol, options);
  if (entry.equivalence && trials > 0 && !v.configuration_error) {
    if (v.accepting == 0) v.configuration_error = "no trial exercised the accepting side of the equivalence";
    if (v.rejecting == 0) v.configuration_error = "no trial exercised the rejecting side of the equivalence";
  }
  v.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return v;
}

bool SuiteResult::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const TheoremVerdict& v) { return v.passed(); });
}

SuiteResult run_suite(std::uint64_t seed, std::size_t trials, const ToleranceConfig& tol, const RunOptions& options) {
  SuiteResult out;
  for (const std::string& id : theorem_ids()) {
    out.verdicts.push_back(run_theorem_check(id, default_spec(id, seed), trials, tol, options));
  }
  return out;
}

}  // namespace epkit
