#include "epkit/sequence.hpp"
#include "test_util.hpp"

using namespace epkit;

namespace {
SequenceStudy study(SequenceKind kind, std::uint64_t seed) {
  MatrixGenerator gen(seed);
  return study_sequence(gen.sequence(6, 4, 50.0, kind, 50, 0.1));
}
}  // namespace

TEST(SequenceStudy, ConvergentKinds) {
  for (SequenceKind k : {SequenceKind::scaled, SequenceKind::geometric, SequenceKind::in_range, SequenceKind::e_delta}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SequenceStudy s = study(k, seed);
      EXPECT_TRUE(s.terms_converge) << to_string(k);
      EXPECT_TRUE(s.pinv_converges) << to_string(k);
      EXPECT_TRUE(s.projector_converges) << to_string(k);
      EXPECT_TRUE(s.pinv_bounded) << to_string(k);
      EXPECT_TRUE(s.conditions_agree());
    }
  }
}

TEST(SequenceStudy, GeometricReachesTolerance) {
  const SequenceStudy s = study(SequenceKind::geometric, 3);
  ASSERT_TRUE(s.pinv_below_tol_from.has_value());
  EXPECT_LE(*s.pinv_below_tol_from, 50);
  for (std::size_t k = static_cast<std::size_t>(*s.pinv_below_tol_from - 1); k < s.pinv_error.size(); ++k) {
    EXPECT_LE(s.pinv_error[k], 1e-9);
  }
}

TEST(SequenceStudy, DivergentKinds) {
  for (SequenceKind k : {SequenceKind::off_range, SequenceKind::harmonic}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SequenceStudy s = study(k, seed);
      EXPECT_TRUE(s.terms_converge) << to_string(k);
      EXPECT_FALSE(s.pinv_converges) << to_string(k);
      EXPECT_FALSE(s.projector_converges) << to_string(k);
      EXPECT_FALSE(s.pinv_bounded) << to_string(k);
    }
  }
}

TEST(SequenceStudy, HarmonicPseudoinverseNorms) {
  const SequenceStudy s = study(SequenceKind::harmonic, 0);
  for (std::size_t k = 0; k < s.pinv_norm.size(); ++k) {
    EXPECT_NEAR(s.pinv_norm[k], static_cast<double>(k + 1), 1e-12);
  }
  EXPECT_NEAR(s.sup_pinv_norm, 50.0, 1e-12);
}

TEST(SequenceStudy, Errors) {
  MatrixSequence bad{SequenceKind::scaled, {ComplexMatrix::identity(2)}, ComplexMatrix::identity(2), true};
  EXPECT_THROW(study_sequence(bad), InvalidSpec);
  bad.terms.push_back(ComplexMatrix::identity(3));
  EXPECT_THROW(study_sequence(bad), DimensionMismatch);
}
