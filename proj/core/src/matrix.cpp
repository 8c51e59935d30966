#include "epkit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace epkit {

namespace {

void check_shape(Index rows, Index cols) {
  if (rows < 1 || cols < 1 || rows > kMaxDimension || cols > kMaxDimension) {
    throw InvalidDimension("matrix dimensions must lie in [1, " + std::to_string(kMaxDimension) +
                           "], got " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

std::string shape(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void ToleranceConfig::validate() const {
  if (!(rank_rtol > 0.0 && rank_rtol < 1.0)) {
    throw InvalidTolerance("rank_rtol must lie in (0, 1)");
  }
  if (!(eq_atol > 0.0 && eq_atol < 1.0)) {
    throw InvalidTolerance("eq_atol must lie in (0, 1)");
  }
}

ComplexMatrix::ComplexMatrix(Index rows, Index cols) {
  check_shape(rows, cols);
  m_ = DenseMatrix::Zero(rows, cols);
}

ComplexMatrix::ComplexMatrix(DenseMatrix entries) : m_(std::move(entries)) {
  check_shape(m_.rows(), m_.cols());
  if (!m_.allFinite()) {
    throw NonFiniteValue("matrix entries must be finite");
  }
}

ComplexMatrix::ComplexMatrix(Index rows, Index cols, std::span<const Complex> row_major) {
  check_shape(rows, cols);
  if (static_cast<Index>(row_major.size()) != rows * cols) {
    throw DimensionMismatch("expected " + std::to_string(rows * cols) + " entries, got " +
                            std::to_string(row_major.size()));
  }
  m_.resize(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      m_(r, c) = row_major[static_cast<std::size_t>(r * cols + c)];
    }
  }
  if (!m_.allFinite()) {
    throw NonFiniteValue("matrix entries must be finite");
  }
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto nrows = static_cast<Index>(rows.size());
  const auto ncols = nrows > 0 ? static_cast<Index>(rows.begin()->size()) : 0;
  std::vector<Complex> flat;
  flat.reserve(static_cast<std::size_t>(nrows * ncols));
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != ncols) {
      throw DimensionMismatch("ragged row list");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return {nrows, ncols, flat};
}

ComplexMatrix ComplexMatrix::identity(Index n) {
  check_shape(n, n);
  return ComplexMatrix(DenseMatrix::Identity(n, n));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> entries) {
  const auto n = static_cast<Index>(entries.size());
  check_shape(n, n);
  DenseMatrix m = DenseMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return ComplexMatrix(std::move(m));
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<Complex> entries) {
  return diagonal(std::span<const Complex>(entries.begin(), entries.size()));
}

Complex ComplexMatrix::operator()(Index r, Index c) const {
  if (r < 0 || c < 0 || r >= rows() || c >= cols()) {
    throw std::out_of_range("matrix index out of range");
  }
  return m_(r, c);
}

std::vector<Complex> ComplexMatrix::row_major() const {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(rows() * cols()));
  for (Index r = 0; r < rows(); ++r) {
    for (Index c = 0; c < cols(); ++c) out.push_back(m_(r, c));
  }
  return out;
}

bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.m_ == b.m_;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("cannot add " + shape(a) + " and " + shape(b));
  }
  return ComplexMatrix(a.dense() + b.dense());
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("cannot subtract " + shape(b) + " from " + shape(a));
  }
  return ComplexMatrix(a.dense() - b.dense());
}

ComplexMatrix operator-(const ComplexMatrix& a) { return ComplexMatrix(-a.dense()); }

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) { return ComplexMatrix(s * a.dense()); }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return multiply(a, b); }

ComplexMatrix adjoint(const ComplexMatrix& m) { return ComplexMatrix(m.dense().adjoint()); }

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("cannot multiply " + shape(a) + " by " + shape(b));
  }
  return ComplexMatrix(a.dense() * b.dense());
}

ComplexMatrix power(const ComplexMatrix& m, int n) {
  if (!m.is_square()) throw NotSquare("power of a non-square matrix");
  if (n < 0) throw InvalidExponent("matrix power exponent must be non-negative");
  DenseMatrix result = DenseMatrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < n; ++i) result = result * m.dense();
  return ComplexMatrix(std::move(result));
}

SvdFactorization svd(const ComplexMatrix& m, const ToleranceConfig& tol) {
  tol.validate();
  Eigen::JacobiSVD<DenseMatrix> solver(m.dense(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("SVD did not converge");
  }
  const auto& sv = solver.singularValues();
  if (!sv.allFinite() || !solver.matrixU().allFinite() || !solver.matrixV().allFinite()) {
    throw ConvergenceFailure("SVD produced non-finite output");
  }

  SvdFactorization f{ComplexMatrix(solver.matrixU()),
                     std::vector<double>(sv.data(), sv.data() + sv.size()),
                     ComplexMatrix(solver.matrixV()),
                     0,
                     0.0};
  const double sigma1 = f.singular_values.empty() ? 0.0 : f.singular_values.front();
  f.cutoff = tol.rank_rtol * sigma1;
  f.numerical_rank = static_cast<Index>(
      std::count_if(f.singular_values.begin(), f.singular_values.end(),
                    [&](double s) { return s > f.cutoff; }));
  return f;
}

HermitianEigen hermitian_eig(const ComplexMatrix& h, const ToleranceConfig& tol) {
  tol.validate();
  if (!h.is_square()) throw NotSquare("hermitian_eig requires a square matrix");
  const DenseMatrix& H = h.dense();
  const double asym = spectral_norm(H - H.adjoint());
  if (asym > tol.eq_atol * (1.0 + spectral_norm(H))) {
    throw NotHermitian("matrix is not Hermitian (||H - H*|| = " + std::to_string(asym) + ")");
  }
  const DenseMatrix sym = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("Hermitian eigensolver did not converge");
  }
  // Eigen returns ascending order.
  const Index n = sym.rows();
  std::vector<double> values(static_cast<std::size_t>(n));
  DenseMatrix vectors(n, n);
  for (Index i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(i)] = solver.eigenvalues()(n - 1 - i);
    vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return {std::move(values), ComplexMatrix(std::move(vectors))};
}

std::vector<Complex> eigenvalues(const ComplexMatrix& m, const ToleranceConfig& tol) {
  tol.validate();
  if (!m.is_square()) throw NotSquare("eigenvalues require a square matrix");
  Eigen::ComplexEigenSolver<DenseMatrix> solver(m.dense(), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("QR iteration for eigenvalues did not converge");
  }
  const auto& ev = solver.eigenvalues();
  if (!ev.allFinite()) throw ConvergenceFailure("eigenvalue iteration produced non-finite output");
  std::vector<Complex> out(ev.data(), ev.data() + ev.size());
  std::stable_sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

double spectral_norm(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<DenseMatrix> solver(m);
  return solver.singularValues().size() > 0 ? solver.singularValues()(0) : 0.0;
}

double operator_norm(const ComplexMatrix& m) { return spectral_norm(m.dense()); }

}  // namespace epkit
