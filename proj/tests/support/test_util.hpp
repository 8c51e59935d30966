#pragma once

#include <gtest/gtest.h>

#include "epkit/generators.hpp"
#include "oracles.hpp"

namespace testutil {

using namespace epkit;

inline ComplexMatrix gaussian(std::uint64_t seed, Index rows, Index cols) {
  MatrixGenerator gen(seed);
  return ComplexMatrix(gen.gaussian_matrix(rows, cols));
}

inline double dist(const ComplexMatrix& a, const ComplexMatrix& b) {
  return oracle::spectral_norm(a.dense() - b.dense());
}

inline double dist(const DenseMatrix& a, const DenseMatrix& b) { return oracle::spectral_norm(a - b); }

}  // namespace testutil
