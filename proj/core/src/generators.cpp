#include "epkit/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "epkit/classify.hpp"
#include "epkit/pinv.hpp"
#include "epkit/subspace.hpp"

namespace epkit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

DenseMatrix block_embed(Index dim, const DenseMatrix& top_left) {
  DenseMatrix out = DenseMatrix::Zero(dim, dim);
  out.topLeftCorner(top_left.rows(), top_left.cols()) = top_left;
  return out;
}

/// Cayley transform (I - X/2)^-1 (I + X/2); unitary for anti-Hermitian X.
DenseMatrix cayley(const DenseMatrix& x) {
  const DenseMatrix id = DenseMatrix::Identity(x.rows(), x.cols());
  return (id - 0.5 * x).partialPivLu().solve(id + 0.5 * x);
}

DenseMatrix matrix_polynomial(const std::vector<Complex>& coeffs, const DenseMatrix& m) {
  DenseMatrix acc = DenseMatrix::Zero(m.rows(), m.cols());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * m;
    acc.diagonal().array() += *it;
  }
  return acc;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

std::string_view to_string(Family f) {
  switch (f) {
    case Family::ep: return "ep";
    case Family::non_ep: return "non_ep";
    case Family::normal_ep: return "normal_ep";
    case Family::commuting_pair: return "commuting_pair";
    case Family::perturbation_pair: return "perturbation_pair";
    case Family::product_pair: return "product_pair";
    case Family::sequence: return "sequence";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (auto f : {Family::ep, Family::non_ep, Family::normal_ep, Family::commuting_pair,
                 Family::perturbation_pair, Family::product_pair, Family::sequence}) {
    if (to_string(f) == name) return f;
  }
  throw InvalidSpec("unknown generator family '" + std::string(name) + "'");
}

std::string_view to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::scaled: return "scaled";
    case SequenceKind::geometric: return "geometric";
    case SequenceKind::in_range: return "in_range";
    case SequenceKind::off_range: return "off_range";
    case SequenceKind::harmonic: return "harmonic";
    case SequenceKind::e_delta: return "e_delta";
  }
  return "unknown";
}

void GeneratorSpec::validate() const {
  if (dim < 1 || dim > kMaxDimension) {
    throw InvalidSpec("dim must lie in [1, " + std::to_string(kMaxDimension) + "]");
  }
  if (rank < 0 || rank > dim) throw InvalidSpec("rank must lie in [0, dim]");
  if (!(condition_bound >= 1.0) || !std::isfinite(condition_bound)) {
    throw InvalidSpec("condition_bound must be >= 1");
  }
  if (family == Family::non_ep && (rank < 1 || rank >= dim)) {
    throw InvalidSpec("non-EP matrices need 1 <= rank < dim (invertible matrices are EP)");
  }
}

void PerturbationSpec::validate() const {
  if (!(a > 0.0 && a < 1.0) || !(b > 0.0 && b < 1.0)) {
    throw InvalidSpec("perturbation constants must lie in (0, 1)");
  }
}

MatrixGenerator::MatrixGenerator(std::uint64_t seed, ToleranceConfig tol) : rng_(seed), tol_(tol) {
  tol_.validate();
}

double MatrixGenerator::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Complex MatrixGenerator::gaussian() {
  std::normal_distribution<double> n(0.0, std::numbers::sqrt2 / 2.0);
  const double re = n(rng_);
  const double im = n(rng_);
  return {re, im};
}

DenseMatrix MatrixGenerator::gaussian_matrix(Index rows, Index cols) {
  DenseMatrix g(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) g(r, c) = gaussian();
  }
  return g;
}

DenseMatrix MatrixGenerator::unitary(Index n) {
  const DenseMatrix g = gaussian_matrix(n, n);
  Eigen::HouseholderQR<DenseMatrix> qr(g);
  DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(n, n);
  const DenseMatrix& r = qr.matrixQR();
  for (Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(i) *= d / mag;
  }
  return q;
}

std::vector<double> MatrixGenerator::singular_spectrum(Index k, double condition_bound, double scale) {
  std::vector<double> s(static_cast<std::size_t>(std::max<Index>(k, 0)));
  if (k == 0) return s;
  const double log_cond = std::log(condition_bound);
  for (Index i = 0; i < k; ++i) {
    s[static_cast<std::size_t>(i)] = scale * std::exp(-uniform(0.0, 1.0) * log_cond);
  }
  s.front() = scale;
  if (k > 1) s.back() = scale / condition_bound;
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

DenseMatrix MatrixGenerator::invertible(Index k, double condition_bound, double scale) {
  if (k == 0) return DenseMatrix(0, 0);
  const DenseMatrix w1 = unitary(k);
  const DenseMatrix w2 = unitary(k);
  const auto s = singular_spectrum(k, condition_bound, scale);
  const Eigen::VectorXd sv = Eigen::Map<const Eigen::VectorXd>(s.data(), k);
  return w1 * sv.asDiagonal() * w2.adjoint();
}

ComplexMatrix MatrixGenerator::ranked(Index rows, Index cols, Index k, double condition_bound) {
  const double scale = uniform(0.5, 2.0);
  const DenseMatrix u = unitary(rows);
  const DenseMatrix v = unitary(cols);
  if (k == 0) return ComplexMatrix(rows, cols);
  const auto s = singular_spectrum(k, condition_bound, scale);
  const Eigen::VectorXd sv = Eigen::Map<const Eigen::VectorXd>(s.data(), k);
  return ComplexMatrix(u.leftCols(k) * sv.asDiagonal() * v.leftCols(k).adjoint());
}

MatrixGenerator::EpParts MatrixGenerator::ep_parts(Index dim, Index rank, double condition_bound) {
  const double scale = uniform(0.5, 2.0);
  DenseMatrix v = unitary(dim);
  DenseMatrix a = invertible(rank, condition_bound, scale);
  ComplexMatrix t(v * block_embed(dim, a) * v.adjoint());
  const SvdFactorization f = svd(t, tol_);
  if (f.numerical_rank != rank || !is_ep(f, tol_)) {
    throw Error("EP generator self-validation failed");
  }
  return {std::move(t), std::move(v), std::move(a)};
}

ComplexMatrix MatrixGenerator::ep(Index dim, Index rank, double condition_bound) {
  return ep_parts(dim, rank, condition_bound).matrix;
}

ComplexMatrix MatrixGenerator::non_ep(Index dim, Index rank, double condition_bound) {
  if (rank < 1 || rank >= dim) {
    throw InvalidSpec("non-EP matrices need 1 <= rank < dim");
  }
  const double min_gap = std::max(0.05, 20.0 * tol_.eq_atol);
  double coupling = 0.5;
  for (int attempt = 0; attempt < 32; ++attempt, coupling *= 0.5) {
    const double scale = uniform(0.5, 2.0);
    const Index head = rank - 1;
    DenseMatrix b = DenseMatrix::Zero(dim, dim);
    b.topLeftCorner(head, head) = invertible(head, condition_bound, scale);
    // Coupling from the nilpotent cell into the invertible block.
    b.block(0, head, head, 2) = coupling * scale * gaussian_matrix(head, 2);
    const Complex phase = std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi));
    b(head, head + 1) = scale * phase;

    const DenseMatrix v = unitary(dim);
    ComplexMatrix t(v * b * v.adjoint());
    const ClassificationReport r = classify(t, tol_);
    if (!r.is_ep && r.rank == rank && r.range_gap >= min_gap) return t;
  }
  throw Error("non-EP generator could not reach the required range gap");
}

ComplexMatrix MatrixGenerator::normal_ep(Index dim, Index rank, double condition_bound) {
  const double scale = uniform(0.5, 2.0);
  const DenseMatrix v = unitary(dim);
  const auto s = singular_spectrum(rank, condition_bound, scale);
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(dim);
  for (Index i = 0; i < rank; ++i) {
    d(i) = std::polar(s[static_cast<std::size_t>(i)], uniform(0.0, 2.0 * std::numbers::pi));
  }
  ComplexMatrix t(v * d.asDiagonal() * v.adjoint());
  if (!is_normal(t, tol_) || !is_ep(t, tol_)) throw Error("normal EP generator self-validation failed");
  return t;
}

MatrixPair MatrixGenerator::commuting_pair(Index dim, Index rank, double condition_bound,
                                           std::uint32_t variant) {
  EpParts parts = ep_parts(dim, rank, condition_bound);
  std::vector<Complex> coeffs(4);
  for (auto& c : coeffs) c = 0.5 * gaussian();

  switch (variant % 3) {
    case 0:
      return {parts.matrix, ComplexMatrix(matrix_polynomial(coeffs, parts.matrix.dense()))};
    case 1: {
      // diag(p(A^-1), S4) in the basis V: commutes with T^+ and with T.
      DenseMatrix block = DenseMatrix::Zero(dim, dim);
      if (rank > 0) {
        const DenseMatrix a_inv = parts.block.inverse();
        block.topLeftCorner(rank, rank) = matrix_polynomial(coeffs, a_inv);
      }
      if (rank < dim) block.bottomRightCorner(dim - rank, dim - rank) = gaussian_matrix(dim - rank, dim - rank);
      return {parts.matrix, ComplexMatrix(parts.basis * block * parts.basis.adjoint())};
    }
    default:
      return {parts.matrix, ComplexMatrix(gaussian_matrix(dim, dim))};
  }
}

MatrixPair MatrixGenerator::perturbation_pair(Index dim, Index rank, double condition_bound,
                                              const PerturbationSpec& p, std::uint32_t variant) {
  p.validate();
  const double bound = std::min(p.a, p.b);
  switch (variant % 3) {
    case 0: {
      ComplexMatrix t = ep(dim, rank, condition_bound);
      const Complex c = std::polar(bound * uniform(0.1, 1.0), uniform(0.0, 2.0 * std::numbers::pi));
      return {t, c * t};
    }
    case 1: {
      EpParts parts = ep_parts(dim, rank, condition_bound);
      DenseMatrix s = DenseMatrix::Zero(dim, dim);
      if (rank > 0) {
        const double sigma_min = reduced_min_modulus(ComplexMatrix(parts.block), tol_);
        DenseMatrix b = invertible(rank, condition_bound, 1.0);
        b *= bound * sigma_min * uniform(0.1, 0.95);
        s = parts.basis * block_embed(dim, b) * parts.basis.adjoint();
      }
      return {parts.matrix, ComplexMatrix(s)};
    }
    default: {
      const double scale = uniform(0.5, 2.0);
      const DenseMatrix v = unitary(dim);
      const auto sv = singular_spectrum(rank, condition_bound, scale);
      Eigen::VectorXcd d = Eigen::VectorXcd::Zero(dim);
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
      for (Index i = 0; i < rank; ++i) {
        d(i) = std::polar(sv[static_cast<std::size_t>(i)], uniform(0.0, 2.0 * std::numbers::pi));
        e(i) = d(i) * std::polar(bound * uniform(0.1, 0.95), uniform(0.0, 2.0 * std::numbers::pi));
      }
      return {ComplexMatrix(v * d.asDiagonal() * v.adjoint()), ComplexMatrix(v * e.asDiagonal() * v.adjoint())};
    }
  }
}

MatrixPair MatrixGenerator::product_pair(Index dim, Index rank, double condition_bound, std::uint32_t variant) {
  switch (variant % 3) {
    case 0: {
      ComplexMatrix t = ep(dim, rank, condition_bound);
      ComplexMatrix s = ep(dim, rank, condition_bound);
      return {std::move(t), std::move(s)};
    }
    case 1: {
      EpParts parts = ep_parts(dim, rank, condition_bound);
      const DenseMatrix b = invertible(rank, condition_bound, uniform(0.5, 2.0));
      ComplexMatrix s(parts.basis * block_embed(dim, b) * parts.basis.adjoint());
      return {parts.matrix, std::move(s)};
    }
    default: {
      ComplexMatrix t = ep(dim, rank, condition_bound);
      ComplexMatrix s(invertible(dim, condition_bound, uniform(0.5, 2.0)));
      return {std::move(t), std::move(s)};
    }
  }
}

MatrixSequence MatrixGenerator::sequence(Index dim, Index rank, double condition_bound, SequenceKind kind,
                                         Index length, double delta) {
  if (length < 2) throw InvalidSpec("sequences need at least two terms");
  std::vector<ComplexMatrix> terms;
  terms.reserve(static_cast<std::size_t>(length));

  switch (kind) {
    case SequenceKind::scaled:
    case SequenceKind::geometric: {
      ComplexMatrix t = ep(dim, rank, condition_bound);
      for (Index k = 1; k <= length; ++k) {
        const double eps = kind == SequenceKind::scaled ? 1.0 / static_cast<double>(k)
                                                        : std::ldexp(1.0, -static_cast<int>(k));
        terms.push_back(Complex(1.0 + eps) * t);
      }
      return {kind, std::move(terms), std::move(t), true};
    }
    case SequenceKind::in_range: {
      EpParts parts = ep_parts(dim, rank, condition_bound);
      DenseMatrix e = DenseMatrix::Zero(rank, rank);
      if (rank > 0) {
        const double sigma_min = reduced_min_modulus(ComplexMatrix(parts.block), tol_);
        e = gaussian_matrix(rank, rank);
        e *= 0.5 * sigma_min / spectral_norm(e);
      }
      for (Index k = 1; k <= length; ++k) {
        const DenseMatrix block = parts.block + e / static_cast<double>(k);
        terms.emplace_back(parts.basis * block_embed(dim, block) * parts.basis.adjoint());
      }
      return {kind, std::move(terms), std::move(parts.matrix), true};
    }
    case SequenceKind::off_range: {
      if (dim < 2) throw InvalidSpec("off-range sequences need dim >= 2");
      const Index r = std::min(rank, dim - 1);
      EpParts parts = ep_parts(dim, r, condition_bound);
      // Unitary block on N(T) scaled by sigma_min(A): ||T_k^+|| = k / sigma_min(A) exactly.
      const double sigma_min = r > 0 ? reduced_min_modulus(ComplexMatrix(parts.block), tol_) : 1.0;
      DenseMatrix g = DenseMatrix::Zero(dim, dim);
      g.bottomRightCorner(dim - r, dim - r) = sigma_min * unitary(dim - r);
      g = parts.basis * g * parts.basis.adjoint();
      for (Index k = 1; k <= length; ++k) {
        terms.emplace_back(parts.matrix.dense() + g / static_cast<double>(k));
      }
      return {kind, std::move(terms), std::move(parts.matrix), false};
    }
    case SequenceKind::harmonic: {
      const Index ambient = length + 1;
      if (ambient > kMaxDimension) throw InvalidSpec("harmonic sequence exceeds the size cap");
      auto diag = [&](Index n) {
        std::vector<Complex> d(static_cast<std::size_t>(ambient), 0.0);
        for (Index j = 0; j < n; ++j) d[static_cast<std::size_t>(j)] = 1.0 / static_cast<double>(j + 1);
        return ComplexMatrix::diagonal(d);
      };
      for (Index k = 1; k <= length; ++k) terms.push_back(diag(k));
      return {kind, std::move(terms), diag(ambient), false};
    }
    case SequenceKind::e_delta: {
      if (rank < 1) throw InvalidSpec("E_delta sequences need rank >= 1");
      if (!(delta > 0.0)) throw InvalidSpec("delta must be positive");
      const double cond = std::min(condition_bound, 10.0);
      const DenseMatrix w = unitary(dim);
      const double sigma_min = 2.0 * delta * uniform(1.0, 2.0);
      const DenseMatrix a = invertible(rank, cond, sigma_min * cond);
      DenseMatrix e = gaussian_matrix(rank, rank);
      e *= delta / spectral_norm(e);
      DenseMatrix rot = gaussian_matrix(dim, dim);
      rot = 0.5 * (rot - rot.adjoint());
      rot /= spectral_norm(rot);
      for (Index k = 1; k <= length; ++k) {
        const double eps = std::ldexp(1.0, -static_cast<int>(k));
        const DenseMatrix wk = w * cayley(eps * rot);
        terms.emplace_back(wk * block_embed(dim, a + eps * e) * wk.adjoint());
      }
      ComplexMatrix limit(w * block_embed(dim, a) * w.adjoint());
      return {kind, std::move(terms), std::move(limit), true};
    }
  }
  throw InvalidSpec("unknown sequence kind");
}

GeneratedInstance gen_matrix(const GeneratorSpec& spec, const ToleranceConfig& tol,
                             const PerturbationSpec& perturbation) {
  spec.validate();
  MatrixGenerator gen(spec.seed, tol);
  switch (spec.family) {
    case Family::ep: return gen.ep(spec.dim, spec.rank, spec.condition_bound);
    case Family::non_ep: return gen.non_ep(spec.dim, spec.rank, spec.condition_bound);
    case Family::normal_ep: return gen.normal_ep(spec.dim, spec.rank, spec.condition_bound);
    case Family::commuting_pair:
      return gen.commuting_pair(spec.dim, spec.rank, spec.condition_bound, spec.variant);
    case Family::perturbation_pair:
      return gen.perturbation_pair(spec.dim, spec.rank, spec.condition_bound, perturbation, spec.variant);
    case Family::product_pair:
      return gen.product_pair(spec.dim, spec.rank, spec.condition_bound, spec.variant);
    case Family::sequence: {
      if (spec.variant > static_cast<std::uint32_t>(SequenceKind::e_delta)) {
        throw InvalidSpec("sequence variant out of range");
      }
      return gen.sequence(spec.dim, spec.rank, spec.condition_bound, static_cast<SequenceKind>(spec.variant));
    }
  }
  throw InvalidSpec("unknown family");
}

bool psd_dominates(const ComplexMatrix& a, const ComplexMatrix& b, const ToleranceConfig& tol) {
  if (!a.is_square() || !b.is_square()) throw NotSquare("psd_dominates needs square matrices");
  if (a.rows() != b.rows()) throw DimensionMismatch("psd_dominates needs matrices of equal size");
  for (const ComplexMatrix* m : {&a, &b}) {
    const double asym = spectral_norm(m->dense() - m->dense().adjoint());
    if (asym > tol.eq_atol * (1.0 + operator_norm(*m))) throw NotHermitian("psd_dominates needs Hermitian inputs");
  }
  const ComplexMatrix diff(0.5 * ((a.dense() - b.dense()) + (a.dense() - b.dense()).adjoint()));
  const HermitianEigen eig = hermitian_eig(diff, tol);
  return eig.eigenvalues.back() >= -tol.eq_atol * (1.0 + operator_norm(a));
}

}  // namespace epkit
