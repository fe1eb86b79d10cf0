#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "rgenp/dense.hpp"
#include "rgenp/errors.hpp"
#include "rgenp/exact.hpp"
#include "rgenp/experiment.hpp"
#include "rgenp/factorization.hpp"
#include "rgenp/report.hpp"
#include "rgenp/stats.hpp"
#include "rgenp/verify.hpp"

namespace rgenp {
namespace {

const CheckRecord& find(const CheckReport& r, const std::string& check) {
  for (const CheckRecord& c : r.records)
    if (c.check == check) return c;
  throw std::runtime_error("no record " + check);
}

long double cofactor_det(const RealMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0);
  long double sum = 0;
  for (std::size_t j = 0; j < n; ++j) {
    RealMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = a(r, c);
    sum += (j % 2 ? -1.0L : 1.0L) * a(0, j) * cofactor_det(minor);
  }
  return sum;
}

TEST(Stats, SampleStatistics) {
  const Vector v{1, 2, 3, 4};
  const StatsRow s = summarize(v, 64, 1);
  EXPECT_EQ(s.dimension, 64u);
  EXPECT_EQ(s.iterations, 1u);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 4.0);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(5.0 / 3.0));
  EXPECT_EQ(s.samples, 4u);
  EXPECT_DOUBLE_EQ(median(v), 2.5);
}

TEST(Stats, NonFiniteValuesAreFailures) {
  const Vector v{1, std::numeric_limits<double>::infinity(), 3,
                 std::numeric_limits<double>::quiet_NaN()};
  const StatsRow s = summarize(v);
  EXPECT_EQ(s.failures, 2u);
  EXPECT_EQ(s.samples, 2u);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
}

TEST(Report, CsvTableHasFixedHeader) {
  TableReport t;
  t.rows.push_back(summarize(Vector{1e-12, 3e-12}, 64, 0));
  std::ostringstream os;
  emit_report(t, OutputFormat::csv, os);
  std::istringstream in(os.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, kCsvHeader);
  EXPECT_EQ(row.substr(0, 5), "64,0,");
  double mn = 0;
  std::istringstream fields(row.substr(5));
  fields >> mn;
  EXPECT_EQ(mn, 1e-12);
}

TEST(Report, EmptyTableIsHeaderOnlyCsv) {
  std::ostringstream os;
  emit_report(TableReport{}, OutputFormat::csv, os);
  EXPECT_EQ(os.str(), std::string(kCsvHeader) + "\n");
}

TEST(Report, MarkdownHasOneLinePerRow) {
  TableReport t;
  for (std::size_t n : {8, 16, 32}) t.rows.push_back(summarize(Vector{1.0, 2.0}, n, 0));
  std::ostringstream os;
  emit_report(t, OutputFormat::markdown, os);
  std::istringstream in(os.str());
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);)
    if (line.rfind("| ", 0) == 0 && line.find("dimension") == std::string::npos) ++rows;
  EXPECT_EQ(rows, 3u);
}

TEST(Report, JsonRowRoundTrips) {
  TableReport t;
  t.rows.push_back(summarize(Vector{1.25e-13, 3.5e-12, 7e-14}, 64, 1));
  std::ostringstream os;
  emit_report(t, OutputFormat::json, os);
  const auto row = nlohmann::json::parse(os.str())["rows"][0];
  EXPECT_EQ(row["dimension"].get<std::size_t>(), 64u);
  EXPECT_EQ(row["iterations"].get<std::size_t>(), 1u);
  EXPECT_EQ(row["min"].get<double>(), t.rows[0].min);
  EXPECT_EQ(row["max"].get<double>(), t.rows[0].max);
  EXPECT_EQ(row["mean"].get<double>(), t.rows[0].mean);
  EXPECT_EQ(row["std"].get<double>(), t.rows[0].std);
}

TEST(Report, JsonTableCarriesSeedAndNullForNonFinite) {
  TableReport t;
  t.title = "x";
  t.master_seed = 0xabc;
  t.config = {{"trials", "2"}};
  StatsRow r = summarize(Vector{std::numeric_limits<double>::infinity()}, 8, 0);
  t.rows.push_back(r);
  std::ostringstream os;
  emit_report(t, OutputFormat::json, os);
  const auto j = nlohmann::json::parse(os.str());
  EXPECT_EQ(j["master_seed"].get<std::uint64_t>(), 0xabcu);
  EXPECT_EQ(j["rows"][0]["failures"].get<int>(), 1);
  EXPECT_TRUE(j["rows"][0]["min"].is_null());
}

TEST(Report, MarkdownAndCheckFormats) {
  CheckReport c;
  c.suite = "demo";
  CheckRecord ok;
  ok.check = "a";
  CheckRecord diag;
  diag.check = "b";
  diag.verdict = false;
  diag.gating = false;
  c.records = {ok, diag};
  EXPECT_TRUE(c.passed());
  EXPECT_EQ(c.failures(), 0u);
  std::ostringstream md;
  emit_report(c, OutputFormat::markdown, md);
  EXPECT_NE(md.str().find("| a |"), std::string::npos);
  std::ostringstream js;
  emit_report(c, OutputFormat::json, js);
  EXPECT_EQ(nlohmann::json::parse(js.str())["records"].size(), 2u);
  c.records[0].verdict = false;
  EXPECT_FALSE(c.passed());
}

TEST(Report, UnwritablePathThrows) {
  EXPECT_THROW(emit_report(CheckReport{}, OutputFormat::csv, "/nonexistent/dir/x.csv"), Error);
  EXPECT_EQ(parse_output_format("md"), OutputFormat::markdown);
  EXPECT_FALSE(parse_output_format("xml").has_value());
}

TEST(Exact, BareissMatchesCofactorExpansion) {
  const FiniteSet delta = FiniteSet::range(-9, 9);
  for (std::uint64_t t = 0; t < 200; ++t) {
    const std::size_t k = 1 + t % 6;
    const RealMatrix a = finite_set_matrix({90, t}, k, k, delta);
    EXPECT_EQ(double(exact_determinant_int(a)), double(cofactor_det(a))) << "k=" << k;
  }
}

TEST(Exact, SmallHandCases) {
  EXPECT_EQ(exact_determinant_int(RealMatrix::identity(3)), 1);
  EXPECT_EQ(exact_determinant_int(RealMatrix{{1, 2}, {3, 4}}), -2);
}

TEST(Exact, SingularAndSwapCases) {
  EXPECT_EQ(exact_determinant_int(RealMatrix{{1, 2}, {2, 4}}), 0);
  EXPECT_EQ(exact_determinant_int(RealMatrix{{0, 1}, {1, 0}}), -1);
  EXPECT_FALSE(strongly_nonsingular_exact(RealMatrix{{0, 1}, {1, 0}}));
  EXPECT_TRUE(strongly_nonsingular_exact(RealMatrix{{1, 1}, {0, 1}}));
  EXPECT_EQ(to_string(Int128(-1234567890123) * 1000000), "-1234567890123000000");
}

TEST(Exact, RejectsUnsupportedInput) {
  EXPECT_THROW(exact_determinant_int(RealMatrix{{0.5}}), ShapeError);
  EXPECT_THROW(exact_determinant_int(RealMatrix(2, 3)), ShapeError);
  EXPECT_THROW(require_exact_capacity(6, 1LL << 40), OverflowRiskError);
  EXPECT_NO_THROW(require_exact_capacity(6, 100));
}

TEST(Exact, OneByOneBoundIsTight) {
  const CheckReport r = check_finite_set_singularity({91, 0}, 1, FiniteSet({0, 1}), 20000);
  const CheckRecord& c = find(r, "nonsingular-dense");
  EXPECT_DOUBLE_EQ(c.bound, 0.5);
  EXPECT_NEAR(c.observed, 0.5, 0.015);
}

TEST(Exact, FiniteSetFrequenciesReachBounds) {
  const CheckReport r = check_finite_set_singularity({92, 0}, 3, FiniteSet::range(0, 9), 20000);
  EXPECT_TRUE(r.passed());
  EXPECT_DOUBLE_EQ(find(r, "nonsingular-toeplitz").bound, 0.7);
  EXPECT_DOUBLE_EQ(find(r, "strongly-nonsingular-dense").bound, 0.4);
}

TEST(Gamma, LanczosMatchesStdTgamma) {
  for (double x : {0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 8.0, 15.5}) {
    EXPECT_NEAR(lanczos_gamma(x) / std::tgamma(x), 1.0, 1e-13) << x;
  }
  EXPECT_NEAR(lanczos_gamma(5.0), 24.0, 1e-11);
}

TEST(Tails, MarginFormula) {
  EXPECT_DOUBLE_EQ(binomial_margin(0.5, 10000), 0.015);
  EXPECT_EQ(binomial_margin(0.0, 100), 0.0);
  EXPECT_THROW(check_tail_bounds({93, 0}, 100), Error);
}

TEST(Tails, NormAndVectorChecksHold) {
  const CheckReport r = check_tail_bounds({94, 0}, 10000);
  for (const CheckRecord& c : r.records) {
    if (c.check.rfind("condition-tail", 0) == 0) continue;
    EXPECT_TRUE(c.verdict) << c.check << " " << c.params << " observed " << c.observed
                           << " bound " << c.bound;
  }
  EXPECT_NO_THROW(find(r, "condition-tail"));
}

TEST(Spectral, GatingBoundsHoldAndLiteralFormsAreRefuted) {
  const CheckReport r = check_spectral_bounds({95, 0}, 200, 8);
  EXPECT_TRUE(r.passed()) << r.failures() << " failing";
  EXPECT_GT(find(r, "leading-block-literal").violations, 0u);
  EXPECT_FALSE(find(r, "leading-block-literal").gating);
  EXPECT_EQ(find(r, "leading-block").violations, 0u);
}

TEST(Spectral, OrthogonalFactorPreservesSpectrum) {
  const RealMatrix q = random_orthonormal({99, 0}, 6);
  const RealMatrix a = gaussian_matrix({99, 1}, 6, 4);
  const Vector s = singular_values(a);
  const Vector t = singular_values(mat_mul(q, a));
  for (std::size_t j = 0; j < s.size(); ++j) EXPECT_NEAR(t[j], s[j], 1e-10);
}

TEST(Spectral, DiagonalTimesIdentityByHand) {
  const Vector s = singular_values(mat_mul(RealMatrix{{2, 0}, {0, 1}}, RealMatrix::identity(2)));
  EXPECT_GE(s[0], 1.0);
  EXPECT_GE(s[1], 1.0);
  EXPECT_DOUBLE_EQ(s[0], 2.0);
  EXPECT_DOUBLE_EQ(s[1], 1.0);
}

TEST(Perturbation, ScalarCounterexampleToPrintedDifferenceBound) {
  // A = 10, E = -5: ||A^-1 E|| = 1/2 and ||(A+E)^-1 - A^-1|| / ||A^-1|| = 1.
  const double a_inv = 0.1;
  const double q = 0.5;
  const double rel_change = std::abs(1.0 / 5.0 - 1.0 / 10.0) / a_inv;
  EXPECT_GT(rel_change, a_inv / (1.0 - q));
  EXPECT_LE(rel_change, q / (1.0 - q) + 1e-15);
  const CheckReport r = check_perturbation({96, 0}, 300, 8);
  EXPECT_TRUE(r.passed());
}

TEST(Safety, SuitesPass) {
  EXPECT_TRUE(check_safety_bounds({97, 0}, 10, 16).passed());
  EXPECT_TRUE(check_schur_algebra({98, 0}, 20, 16, 8).passed());
}

TEST(Experiment, ConfigValidation) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  c.dims = {48};
  EXPECT_THROW(c.validate(), Error);
  c.dims = {64};
  c.trials = 0;
  EXPECT_THROW(c.validate(), Error);
  EXPECT_EQ(parse_method("genp+plan"), Method::genp_plan);
  EXPECT_FALSE(parse_method("lu").has_value());
}

TEST(Experiment, RowsPerDimensionAndStep) {
  ExperimentConfig c;
  c.dims = {16, 32};
  c.trials = 5;
  c.plan.refinement_steps = 1;
  c.master_seed = 99;
  const ExperimentResult r = run_residual_experiment(c);
  ASSERT_EQ(r.table.rows.size(), 4u);
  EXPECT_EQ(r.table.rows[0].dimension, 16u);
  EXPECT_EQ(r.table.rows[1].iterations, 1u);
  EXPECT_EQ(r.trials.size(), 10u);
  EXPECT_EQ(r.table.master_seed, 99u);
}

TEST(Experiment, WorkerCountDoesNotChangeResults) {
  ExperimentConfig c;
  c.dims = {32};
  c.trials = 6;
  c.master_seed = 100;
  const ExperimentResult one = run_residual_experiment(c);
  c.workers = 3;
  const ExperimentResult three = run_residual_experiment(c);
  for (std::size_t i = 0; i < one.trials.size(); ++i)
    EXPECT_EQ(one.trials[i].history, three.trials[i].history);
}

TEST(Experiment, GeppRowIsAccurate) {
  ExperimentConfig c;
  c.dims = {64};
  c.trials = 10;
  c.method = Method::gepp;
  const ExperimentResult r = run_residual_experiment(c);
  EXPECT_LE(r.table.rows[0].max, 1e-10);
}

TEST(ParallelFor, CoversRangeAndRethrows) {
  std::atomic<int> sum{0};
  parallel_for(100, 4, [&](std::size_t i) { sum += int(i); });
  EXPECT_EQ(sum.load(), 4950);
  EXPECT_THROW(parallel_for(10, 2,
                            [](std::size_t i) {
                              if (i == 7) throw Error("boom");
                            }),
               Error);
}

}  // namespace
}  // namespace rgenp
