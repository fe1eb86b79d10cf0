#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rgenp/dense.hpp"
#include "rgenp/errors.hpp"
#include "rgenp/matrix.hpp"
#include "rgenp/random.hpp"

namespace rgenp {
namespace {

RealMatrix naive_product(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      long double s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += (long double)a(i, k) * b(k, j);
      c(i, j) = double(s);
    }
  return c;
}

double max_diff(const RealMatrix& x, const RealMatrix& y) { return max_abs(x - y); }

TEST(MatMul, IdentityLeavesMatrixUnchanged) {
  const RealMatrix m{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  EXPECT_EQ(mat_mul(RealMatrix::identity(3), m), m);
}

TEST(MatMul, HandCheckedTwoByTwo) {
  const RealMatrix c = mat_mul(RealMatrix{{1, 2}, {3, 4}}, RealMatrix{{0}, {1}});
  EXPECT_EQ(c, (RealMatrix{{2}, {4}}));
}

TEST(MatMul, MatchesTripleLoop) {
  const RealMatrix a = gaussian_matrix({7, 1}, 5, 4);
  const RealMatrix b = gaussian_matrix({7, 2}, 4, 3);
  EXPECT_LT(max_diff(mat_mul(a, b), naive_product(a, b)), 1e-14);
}

TEST(MatMul, RejectsMismatchedShapes) {
  EXPECT_THROW(mat_mul(RealMatrix(2, 3), RealMatrix(2, 3)), ShapeError);
  EXPECT_THROW(mat_vec(RealMatrix(2, 3), Vector(2)), ShapeError);
}

TEST(Dot, CompensatedSumSurvivesCancellation) {
  const Vector x{1e16, 1.0, -1e16};
  const Vector y{1.0, 1.0, 1.0};
  EXPECT_EQ(dot(x, y), 1.0);
}

TEST(MatrixText, RoundTripIsExact) {
  const RealMatrix a = gaussian_matrix({3, 3}, 4, 5);
  std::stringstream s;
  write_matrix(s, a);
  EXPECT_EQ(read_matrix(s), a);
}

TEST(MatrixText, SkipsCommentLines) {
  std::stringstream s("# seed=1 n=2\n2 2\n1 2\n3 4\n");
  EXPECT_EQ(read_matrix(s), (RealMatrix{{1, 2}, {3, 4}}));
}

TEST(MatrixText, RejectsMalformedInput) {
  std::stringstream short_rows("2 2\n1 2\n3\n");
  EXPECT_THROW(read_matrix(short_rows), ParseError);
  std::stringstream garbage("2 x\n");
  EXPECT_THROW(read_matrix(garbage), ParseError);
}

TEST(SpectralNorm, DiagonalAndSingleEntry) {
  EXPECT_NEAR(spectral_norm(RealMatrix{{3, 0, 0}, {0, 2, 0}, {0, 0, 1}}), 3.0, 1e-14);
  EXPECT_NEAR(spectral_norm(RealMatrix{{0, 2}, {0, 0}}), 2.0, 1e-14);
}

TEST(SpectralNorm, EstimateAgreesWithSvd) {
  const RealMatrix a = gaussian_matrix({5, 0}, 8, 6);
  EXPECT_NEAR(spectral_norm_estimate(a) / singular_values(a).front(), 1.0, 1e-8);
}

TEST(Svd, RankDeficientDiagonal) {
  const Vector s = singular_values(RealMatrix{{1, 0}, {0, 0}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0], 1.0, 1e-15);
  EXPECT_NEAR(s[1], 0.0, 1e-15);
}

TEST(Svd, ParallelColumnsConverge) {
  const RealMatrix a{{-1, 0, 1}, {1, 0, -1}, {1, 1, -1}};
  const Vector s = singular_values(a);
  EXPECT_EQ(numerical_rank(a), 2u);
  EXPECT_LT(s[2], 1e-15 * s[0]);
}

TEST(Svd, OrthogonalInputHasUnitSpectrum) {
  for (double s : singular_values(random_orthonormal({11, 0}, 7))) EXPECT_NEAR(s, 1.0, 1e-10);
}

TEST(Svd, TransposeHasSameSpectrum) {
  const RealMatrix a = gaussian_matrix({12, 0}, 6, 4);
  const Vector s = singular_values(a);
  const Vector t = singular_values(transpose(a));
  ASSERT_EQ(s.size(), t.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], t[i], 1e-10);
}

TEST(Svd, FactorsReconstructInput) {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{7, 4}, {4, 7}, {6, 6}}) {
    const RealMatrix a = gaussian_matrix({13, m * 10 + n}, m, n);
    const SvdResult r = jacobi_svd(a);
    RealMatrix sigma(m, n);
    for (std::size_t i = 0; i < r.singular_values.size(); ++i) sigma(i, i) = r.singular_values[i];
    const RealMatrix back = mat_mul(mat_mul(r.left_factor, sigma), transpose(r.right_factor));
    EXPECT_LT(max_diff(back, a), 1e-12) << m << "x" << n;
    EXPECT_LT(max_diff(mat_mul(transpose(r.left_factor), r.left_factor), RealMatrix::identity(m)),
              1e-12);
    for (std::size_t i = 1; i < r.singular_values.size(); ++i)
      EXPECT_GE(r.singular_values[i - 1], r.singular_values[i]);
  }
}

TEST(Qr, IdentityAndUnitColumn) {
  const QrResult id = householder_qr(RealMatrix::identity(3));
  EXPECT_LT(max_diff(id.q_factor, RealMatrix::identity(3)), 1e-15);
  EXPECT_LT(max_diff(id.r_factor, RealMatrix::identity(3)), 1e-15);
  const QrResult col = householder_qr(RealMatrix{{0}, {1}});
  EXPECT_LT(max_diff(col.q_factor, RealMatrix{{0}, {1}}), 1e-15);
  EXPECT_LT(max_diff(col.r_factor, RealMatrix{{1}}), 1e-15);
}

TEST(Qr, OrthonormalAndReconstructs) {
  for (std::uint64_t t = 0; t < 10; ++t) {
    const RealMatrix a = gaussian_matrix({14, t}, 6, 6);
    const QrResult r = householder_qr(a);
    EXPECT_LT(max_diff(mat_mul(transpose(r.q_factor), r.q_factor), RealMatrix::identity(6)), 1e-10);
    EXPECT_LT(max_diff(mat_mul(r.q_factor, r.r_factor), a), 1e-10);
    for (std::size_t i = 0; i < 6; ++i) {
      EXPECT_GE(r.r_factor(i, i), 0.0);
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(r.r_factor(i, j), 0.0);
    }
  }
}

TEST(Qr, CompletedBasisIsOrthogonal) {
  const QrResult r = householder_qr(gaussian_matrix({15, 0}, 7, 3));
  const RealMatrix q = complete_orthonormal_basis(r.q_factor);
  ASSERT_EQ(q.cols(), 7u);
  EXPECT_LT(max_diff(mat_mul(transpose(q), q), RealMatrix::identity(7)), 1e-12);
  EXPECT_LT(max_diff(leading_block(q, 7, 3), r.q_factor), 1e-12);
}

TEST(LeadingBlock, WholeAndPartial) {
  const RealMatrix a{{1, 2}, {3, 4}};
  EXPECT_EQ(leading_block(a, 2, 2), a);
  EXPECT_EQ(leading_block(a, 1, 2), (RealMatrix{{1, 2}}));
  EXPECT_THROW(leading_block(a, 3, 1), ShapeError);
}

TEST(LeadingBlock, SingularValuesInterlace) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    const RealMatrix a = gaussian_matrix({16, t}, 8, 8);
    const Vector s = singular_values(a);
    const Vector b = singular_values(leading_block(a, 3, 3));
    for (std::size_t j = 0; j < b.size(); ++j) EXPECT_LE(b[j], s[j] * (1 + 1e-12));
  }
}

TEST(InverseNorm, KnownCases) {
  EXPECT_NEAR(inverse_norm(RealMatrix{{2, 0}, {0, 0.5}}), 2.0, 1e-14);
  EXPECT_NEAR(inverse_norm(random_orthonormal({17, 0}, 5)), 1.0, 1e-12);
  EXPECT_THROW(inverse_norm(RealMatrix{{1, 1}, {1, 1}}), SingularError);
}

TEST(InverseNorm, MatchesSmallestSingularValue) {
  RealMatrix a = gaussian_matrix({18, 0}, 16, 16);
  for (std::size_t i = 0; i < 16; ++i) a(i, i) += 8.0;
  EXPECT_NEAR(inverse_norm(a) * singular_values(a).back(), 1.0, 1e-6);
}

TEST(NumericalRank, CountsAboveTolerance) {
  const RealMatrix a = RealMatrix::diagonal(Vector{1.0, 1e-3, 1e-12});
  EXPECT_EQ(numerical_rank(a), 2u);
  EXPECT_EQ(numerical_rank(a, 1e-2), 1u);
  EXPECT_NEAR(pseudo_inverse_norm(a), 1e3, 1e-9);
}

}  // namespace
}  // namespace rgenp
