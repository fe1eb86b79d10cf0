#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "rgenp/dense.hpp"
#include "rgenp/errors.hpp"
#include "rgenp/random.hpp"

namespace rgenp {
namespace {

TEST(Seed, ParsesDecimalAndHex) {
  EXPECT_EQ(parse_seed("42"), 42u);
  EXPECT_EQ(parse_seed("0x2A"), 42u);
  EXPECT_EQ(parse_seed("18446744073709551615"), UINT64_MAX);
  EXPECT_FALSE(parse_seed("").has_value());
  EXPECT_FALSE(parse_seed("12ab").has_value());
  EXPECT_FALSE(parse_seed("-1").has_value());
  EXPECT_FALSE(parse_seed("18446744073709551616").has_value());
}

TEST(Seed, DerivedStreamsDiffer) {
  const Seed s{5, 0};
  EXPECT_EQ(s.derive(1), s.derive(1));
  EXPECT_NE(s.derive(1), s.derive(2));
  Rng a(s.derive(1));
  Rng b(s.derive(2));
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformAndBelowRanges) {
  Rng rng({60, 0});
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const std::uint64_t k = rng.below(7);
    EXPECT_LT(k, 7u);
    seen.insert(k);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Gaussian, SameSeedIsBitwiseIdentical) {
  EXPECT_EQ(gaussian_matrix({61, 3}, 9, 7), gaussian_matrix({61, 3}, 9, 7));
  EXPECT_NE(gaussian_matrix({61, 3}, 9, 7), gaussian_matrix({61, 4}, 9, 7));
}

TEST(Gaussian, EntryMoments) {
  const RealMatrix g = gaussian_matrix({62, 0}, 200, 200);
  double mean = 0.0;
  for (double x : g.data()) mean += x;
  mean /= 40000.0;
  double var = 0.0;
  for (double x : g.data()) var += (x - mean) * (x - mean);
  var /= 39999.0;
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(Gaussian, SquareSamplesAreFullRank) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const Vector s = singular_values(gaussian_matrix({63, t}, 8, 8));
    EXPECT_GT(s.back() / s.front(), 1e-10);
  }
}

TEST(GaussianCirculant, DeterministicAndCirculant) {
  const CirculantOperator c = gaussian_circulant({64, 0}, 16);
  EXPECT_EQ(c.first_column(), gaussian_circulant({64, 0}, 16).first_column());
  const RealMatrix d = materialize(c);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) EXPECT_EQ(d(i, j), d((i + 1) % 16, (j + 1) % 16));
}

TEST(GaussianCirculant, UsuallyWellConditioned) {
  int good = 0;
  for (std::uint64_t t = 0; t < 100; ++t)
    good += condition_number(materialize(gaussian_circulant({65, t}, 64))) < 1e6 ? 1 : 0;
  EXPECT_GE(good, 95);
}

TEST(GaussianToeplitz, GeneratorCount) {
  const ToeplitzOperator t = gaussian_toeplitz({66, 0}, 5, 3);
  EXPECT_EQ(t.first_column().size(), 5u);
  EXPECT_EQ(t.first_row().size(), 3u);
  EXPECT_EQ(t.first_row()[0], t.first_column()[0]);
}

TEST(Orthonormal, IsOrthogonal) {
  const RealMatrix q = random_orthonormal({67, 0}, 10);
  EXPECT_LT(max_abs(mat_mul(transpose(q), q) - RealMatrix::identity(10)), 1e-13);
}

TEST(FiniteSet, EntriesComeFromSet) {
  const FiniteSet delta({-3, 0, 7});
  EXPECT_EQ(delta.max_abs(), 7);
  const std::set<double> allowed{-3, 0, 7};
  const RealMatrix d = finite_set_matrix({68, 0}, 6, 6, delta);
  for (double x : d.data()) EXPECT_TRUE(allowed.count(x));
  const RealMatrix t = finite_set_matrix({68, 1}, 6, 6, delta, FiniteSetKind::toeplitz);
  for (std::size_t i = 1; i < 6; ++i)
    for (std::size_t j = 1; j < 6; ++j) EXPECT_EQ(t(i, j), t(i - 1, j - 1));
}

TEST(FiniteSet, RangeAndValidation) {
  EXPECT_EQ(FiniteSet::range(0, 9).cardinality(), 10u);
  EXPECT_THROW(FiniteSet(std::vector<long long>{}), Error);
  EXPECT_THROW(FiniteSet::range(3, 2), Error);
}

}  // namespace
}  // namespace rgenp
