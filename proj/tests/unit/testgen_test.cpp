#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "rgenp/dense.hpp"
#include "rgenp/errors.hpp"
#include "rgenp/testgen.hpp"

namespace rgenp {
namespace {

TEST(HardMatrix, ZeroNullityLeavesOrthogonalBlock) {
  const HardInstance inst = hard_matrix({70, 0}, 8, 0);
  for (double s : singular_values(leading_block(inst.matrix, 4, 4))) EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(HardMatrix, LeadingBlockHasPrescribedNullity) {
  const HardInstance inst = hard_matrix({71, 0}, 64, 4);
  const Vector s = singular_values(leading_block(inst.matrix, 32, 32));
  std::size_t small = 0;
  for (double x : s) {
    if (x < 1e-10) ++small;
    else EXPECT_NEAR(x, 1.0, 1e-10);
  }
  EXPECT_EQ(small, 4u);
  ASSERT_TRUE(inst.leading_singular_values.has_value());
}

TEST(HardMatrix, OffDiagonalBlocksAreUnitNormToeplitz) {
  const HardInstance inst = hard_matrix({72, 0}, 16, 2);
  for (auto [r0, c0] : {std::pair<std::size_t, std::size_t>{0, 8}, {8, 0}, {8, 8}}) {
    const RealMatrix b = submatrix(inst.matrix, r0, c0, 8, 8);
    EXPECT_NEAR(spectral_norm(b), 1.0, 1e-10);
    for (std::size_t i = 1; i < 8; ++i)
      for (std::size_t j = 1; j < 8; ++j) EXPECT_EQ(b(i, j), b(i - 1, j - 1));
  }
}

TEST(HardMatrix, RhsHasUnitNorm) {
  const HardInstance inst = hard_matrix({73, 0}, 32);
  EXPECT_NEAR(norm2(inst.rhs), 1.0, 1e-14);
  EXPECT_EQ(inst.rhs.size(), 32u);
}

TEST(HardMatrix, Deterministic) {
  const HardInstance a = hard_matrix({74, 1}, 32);
  const HardInstance b = hard_matrix({74, 1}, 32);
  EXPECT_EQ(a.matrix, b.matrix);
  EXPECT_EQ(a.rhs, b.rhs);
}

TEST(HardMatrix, RejectsBadParameters) {
  EXPECT_THROW(hard_matrix({75, 0}, 48), ShapeError);
  EXPECT_THROW(hard_matrix({75, 0}, 4), ShapeError);
  EXPECT_THROW(hard_matrix({75, 0}, 16, 8), ShapeError);
}

TEST(HardMatrix, InverseNormRange) {
  std::vector<Seed> seeds;
  for (std::uint64_t t = 0; t < 100; ++t) seeds.push_back({76, t});
  const StatsRow row = instance_inverse_norm_stats(seeds, 64);
  EXPECT_GE(row.min, 1e1);
  EXPECT_LE(row.max, 1e5);
  EXPECT_EQ(row.failures, 0u);
}

// The singular leading block hurts GENP, not the conditioning of A: with
// unit-norm random borders ||A^-1|| is of the same order for h = 0 and h = 4.
TEST(HardMatrix, NullityDoesNotDriveInverseNorm) {
  std::vector<double> control;
  std::vector<double> hard;
  for (std::uint64_t t = 0; t < 40; ++t) {
    control.push_back(hard_matrix({78, t}, 64, 0).inverse_norm);
    hard.push_back(hard_matrix({78, t}, 64, 4).inverse_norm);
  }
  const double ratio = median(hard) / median(control);
  EXPECT_GT(ratio, 0.1);
  EXPECT_LT(ratio, 10.0);
}

TEST(HardMatrix, RecordedInverseNormMatchesSvd) {
  const HardInstance inst = hard_matrix({77, 0}, 32);
  EXPECT_NEAR(inst.inverse_norm * singular_values(inst.matrix).back(), 1.0, 1e-8);
}

}  // namespace
}  // namespace rgenp
