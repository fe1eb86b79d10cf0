#include <gtest/gtest.h>

#include <cmath>

#include "rgenp/errors.hpp"
#include "rgenp/factorization.hpp"
#include "rgenp/pipeline.hpp"
#include "rgenp/testgen.hpp"

namespace rgenp {
namespace {

RealMatrix shifted(Seed seed, std::size_t n) {
  RealMatrix a = gaussian_matrix(seed, n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += 2.0 * std::sqrt(double(n));
  return a;
}

TEST(MultiplierKind, Spellings) {
  EXPECT_EQ(parse_multiplier_kind("finite-set"), MultiplierKind::finite_set);
  EXPECT_EQ(parse_multiplier_kind("circulant"), MultiplierKind::circulant);
  EXPECT_FALSE(parse_multiplier_kind("bogus").has_value());
  for (auto k : {MultiplierKind::none, MultiplierKind::gaussian, MultiplierKind::circulant,
                 MultiplierKind::toeplitz, MultiplierKind::hankel, MultiplierKind::finite_set})
    EXPECT_EQ(parse_multiplier_kind(to_string(k)), k);
}

TEST(Multiplier, DenseAndFastFormsAgree) {
  for (auto kind : {MultiplierKind::gaussian, MultiplierKind::circulant, MultiplierKind::toeplitz,
                    MultiplierKind::hankel, MultiplierKind::finite_set}) {
    for (std::size_t n : {16, 128}) {
      const Multiplier m = Multiplier::draw(kind, {80, n}, n);
      const RealMatrix a = gaussian_matrix({80, n + 1}, n, n);
      const RealMatrix d = m.dense();
      EXPECT_LT(max_abs(m.apply(a, Side::left) - mat_mul(d, a)), 1e-10 * n);
      EXPECT_LT(max_abs(m.apply(a, Side::right) - mat_mul(a, d)), 1e-10 * n);
      const bool structured = kind != MultiplierKind::gaussian && kind != MultiplierKind::finite_set;
      EXPECT_EQ(m.fast(), structured && n >= kFastApplyThreshold) << to_string(kind) << n;
    }
  }
}

TEST(Multiplier, NoneIsIdentity) {
  const Multiplier m = Multiplier::draw(MultiplierKind::none, {81, 0}, 5);
  const RealMatrix a = gaussian_matrix({81, 1}, 5, 5);
  EXPECT_EQ(m.apply(a, Side::left), a);
  EXPECT_EQ(m.apply(a, Side::right), a);
}

TEST(Multiplier, FiniteSetEntriesAreSigns) {
  const RealMatrix d = Multiplier::draw(MultiplierKind::finite_set, {82, 0}, 8).dense();
  for (double x : d.data()) EXPECT_TRUE(x == 1.0 || x == -1.0);
}

TEST(PreconditionedSolve, IdentityPlanIsPlainGenp) {
  const RealMatrix a = shifted({83, 0}, 24);
  const Vector b = gaussian_vector({83, 1}, 24);
  const SolveOutcome o = preconditioned_solve(a, b, PreconditionPlan::identity(), {83, 2});
  const Vector x = lu_solve(genp_factor(a).factors, b);
  ASSERT_FALSE(o.failure.has_value());
  EXPECT_EQ(o.x, x);
}

TEST(PreconditionedSolve, RecoversKnownSolution) {
  for (auto kind : {MultiplierKind::gaussian, MultiplierKind::circulant, MultiplierKind::toeplitz,
                    MultiplierKind::hankel, MultiplierKind::finite_set}) {
    const RealMatrix a = shifted({84, 0}, 32);
    const Vector x = gaussian_vector({84, 1}, 32);
    const Vector b = mat_vec(a, x);
    const SolveOutcome o = preconditioned_solve(a, b, {kind, kind, 1, 0.0}, {84, 2});
    ASSERT_FALSE(o.failure.has_value()) << to_string(kind);
    double err = 0.0;
    for (std::size_t i = 0; i < 32; ++i) err = std::max(err, std::abs(o.x[i] - x[i]));
    EXPECT_LT(err, 1e-9) << to_string(kind);
    EXPECT_EQ(o.residual_history.size(), 2u);
    EXPECT_EQ(o.relative_residual, o.residual_history.back());
  }
}

TEST(PreconditionedSolve, GaussianPlanFixesHardInstance) {
  const HardInstance inst = hard_matrix({85, 0}, 64);
  const SolveOutcome o = preconditioned_solve(inst.matrix, inst.rhs, PreconditionPlan{}, {85, 1});
  ASSERT_FALSE(o.failure.has_value());
  EXPECT_LE(o.relative_residual, 4e-9);
}

TEST(PreconditionedSolve, CirculantRefinementGain) {
  const HardInstance inst = hard_matrix({86, 0}, 64);
  const PreconditionPlan plan{MultiplierKind::circulant, MultiplierKind::circulant, 1, 0.0};
  const SolveOutcome o = preconditioned_solve(inst.matrix, inst.rhs, plan, {86, 1});
  ASSERT_FALSE(o.failure.has_value());
  EXPECT_GE(o.residual_history[0] / o.residual_history[1], 1e2);
}

TEST(PreconditionedSolve, ZeroPivotIsReportedNotThrown) {
  const RealMatrix a{{0, 1}, {1, 0}};
  const SolveOutcome o = preconditioned_solve(a, Vector{1, 2}, PreconditionPlan::identity(), {87, 0});
  ASSERT_TRUE(o.failure.has_value());
  EXPECT_EQ(o.failure->kind, "zero-pivot");
  EXPECT_EQ(o.failure->step, 1u);
  EXPECT_TRUE(std::isinf(o.relative_residual));
  EXPECT_TRUE(o.x.empty());
}

TEST(PreconditionedSolve, RejectsMismatchedShapes) {
  EXPECT_THROW(preconditioned_solve(RealMatrix(3, 3, 1.0), Vector(2), {}, {}), ShapeError);
  EXPECT_THROW(preconditioned_solve(RealMatrix(3, 2, 1.0), Vector(3), {}, {}), ShapeError);
}

TEST(Refinement, ExactSolutionBarelyMoves) {
  const RealMatrix a = RealMatrix{{4, 1}, {2, 3}};
  const Vector x{1, -2};
  const Vector b = mat_vec(a, x);
  const PreconditionedSystem sys(a, PreconditionPlan{}, {88, 0});
  const Vector y = refine_once(a, sys, x, b);
  EXPECT_LE(std::hypot(y[0] - x[0], y[1] - x[1]), 1e-12 * std::hypot(x[0], x[1]));
}

TEST(Refinement, SeedDeterminesMultipliers) {
  const RealMatrix a = shifted({89, 0}, 16);
  const PreconditionedSystem s1(a, PreconditionPlan{}, {89, 1});
  const PreconditionedSystem s2(a, PreconditionPlan{}, {89, 1});
  const PreconditionedSystem s3(a, PreconditionPlan{}, {89, 2});
  EXPECT_EQ(s1.preconditioned(), s2.preconditioned());
  EXPECT_NE(s1.preconditioned(), s3.preconditioned());
}

TEST(RelativeResidual, ZeroForExactSolution) {
  const RealMatrix a{{2, 0}, {0, 4}};
  EXPECT_EQ(relative_residual(a, Vector{1, 1}, Vector{2, 4}), 0.0);
  EXPECT_DOUBLE_EQ(relative_residual(a, Vector{0, 0}, Vector{2, 4}), 1.0);
}

}  // namespace
}  // namespace rgenp
