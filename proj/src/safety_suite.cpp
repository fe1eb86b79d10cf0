#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rgenp/dense.hpp"
#include "rgenp/errors.hpp"
#include "rgenp/factorization.hpp"
#include "rgenp/verify.hpp"

namespace rgenp {

namespace {

RealMatrix gram_plus_identity(Seed seed, std::size_t n) {
  const RealMatrix g = gaussian_matrix(seed, n, n);
  return mat_mul(transpose(g), g) + RealMatrix::identity(n);
}

// Gaussian with a diagonal shift that keeps every leading block well
// conditioned.
RealMatrix shifted_gaussian(Seed seed, std::size_t n) {
  RealMatrix a = gaussian_matrix(seed, n, n);
  const double shift = 2.0 * std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) a(i, i) += shift;
  return a;
}

double relative_difference(const RealMatrix& x, const RealMatrix& y) {
  return frobenius_norm(x - y) / std::max(frobenius_norm(y), 1e-300);
}

struct Worst {
  double value = 0.0;
  std::size_t violations = 0;
  std::size_t samples = 0;

  void add(double v, double limit) {
    ++samples;
    value = std::max(value, v);
    if (!(v <= limit)) ++violations;
  }
};

CheckRecord make_record(const std::string& check, const std::string& params, double bound,
                        const Worst& w, const std::string& note) {
  CheckRecord r;
  r.check = check;
  r.params = params;
  r.bound = bound;
  r.observed = w.value;
  r.samples = w.samples;
  r.violations = w.violations;
  r.verdict = w.violations == 0;
  r.note = note;
  return r;
}

}  // namespace

CheckReport check_safety_bounds(Seed seed, std::size_t trials, std::size_t n) {
  if (trials == 0 || n < 2) throw Error("check_safety_bounds: need trials and n >= 2");
  Worst pivot;
  Worst inverse;
  Worst growth;
  Worst applicable;
  double max_growth_bound = 0.0;
  const std::vector<BlockSchedule> schedules = {
      BlockSchedule::uniform(n, 1), BlockSchedule::uniform(n, std::max<std::size_t>(1, n / 4)),
      BlockSchedule::uniform(n, std::max<std::size_t>(1, n / 2))};

  for (std::size_t t = 0; t < trials; ++t) {
    const RealMatrix a = gram_plus_identity(seed.derive(t), n);
    std::vector<SafetyReport> reports;
    reports.push_back(genp_factor(a, 0.0, MonitorNorm::spectral).safety);
    for (const BlockSchedule& s : schedules)
      reports.push_back(block_genp_factor(a, s, MonitorNorm::spectral).safety);
    for (const SafetyReport& rep : reports) {
      const SafetyVerdict v = safety_check(a, rep);
      applicable.add(v.applicable ? 0.0 : 1.0, 0.0);
      if (!v.applicable) continue;
      pivot.add(v.max_pivot_ratio, 1.0 + kSafetySlack);
      inverse.add(v.max_inverse_ratio, 1.0 + kSafetySlack);
      growth.add(v.growth_factor / v.growth_bound, 1.0 + kSafetySlack);
      max_growth_bound = std::max(max_growth_bound, v.growth_bound);
    }
  }

  CheckReport report;
  report.suite = "safety bounds";
  report.seed = seed;
  const std::string params = "n=" + std::to_string(n) + " trials=" + std::to_string(trials) +
                             " G^T G + I";
  report.records.push_back(make_record("strongly-nonsingular", params, 0.0, applicable,
                                       "1 marks an input the bounds do not apply to"));
  report.records.push_back(make_record("pivot-norm-vs-N+", params, 1.0 + kSafetySlack, pivot,
                                       "max ||pivot|| / N_+ over GENP and block schedules"));
  report.records.push_back(make_record("pivot-inverse-vs-N-", params, 1.0 + kSafetySlack,
                                       inverse, "max ||pivot^-1|| / N_-"));
  report.records.push_back(make_record(
      "growth-vs-bound", params, 1.0 + kSafetySlack, growth,
      "growth / (N_+ N_-)^{log2 n}; largest bound seen " + std::to_string(max_growth_bound) +
          ", GEPP bound 2^{n-1} = " + std::to_string(std::pow(2.0, double(n) - 1.0))));
  return report;
}

CheckReport check_schur_algebra(Seed seed, std::size_t trials, std::size_t n,
                                std::size_t det_n) {
  if (trials == 0 || n < 4 || det_n < 2) throw Error("check_schur_algebra: bad sizes");
  Worst invariance;
  Worst nesting;
  Worst det;

  for (std::size_t t = 0; t < trials; ++t) {
    const RealMatrix a = shifted_gaussian(seed.derive(t), n);
    Rng rng(seed.derive(0x5c00 + t));
    const std::size_t k = 1 + static_cast<std::size_t>(rng.below(n - 1));
    const RealMatrix s = schur_complement(a, k);

    // Schedules whose prefixes sum to k, each closed by the trailing n - k
    // block: that block is S(A^(k), A) after the prefix is eliminated.
    std::vector<BlockSchedule> prefixes;
    prefixes.push_back(BlockSchedule::uniform(k, 1));
    prefixes.push_back(BlockSchedule{{k}});
    BlockSchedule random_prefix;
    for (std::size_t done = 0; done < k;) {
      const std::size_t d = 1 + static_cast<std::size_t>(rng.below(k - done));
      random_prefix.pivot_sizes.push_back(d);
      done += d;
    }
    prefixes.push_back(random_prefix);
    for (BlockSchedule sched : prefixes) {
      sched.pivot_sizes.push_back(n - k);
      const BlockResult res = block_genp_factor(a, sched, MonitorNorm::none);
      invariance.add(
          relative_difference(res.factors.pivot_block(sched.pivot_sizes.size() - 1), s),
          1e-10);
    }

    // S(A^(h), A^(kk)) equals the leading (kk - h) block of S(A^(h), A).
    const std::size_t h = 1 + static_cast<std::size_t>(rng.below(n - 2));
    const std::size_t kk = h + 1 + static_cast<std::size_t>(rng.below(n - h));
    const RealMatrix outer = leading_block(schur_complement(a, h), kk - h, kk - h);
    const RealMatrix inner = schur_complement(leading_block(a, kk, kk), h);
    nesting.add(relative_difference(inner, outer), 1e-10);

    const RealMatrix small = shifted_gaussian(seed.derive(0xde7000 + t), det_n);
    const double d_full = determinant(small);
    for (std::size_t b = 1; b < det_n; ++b) {
      const double d_split =
          determinant(leading_block(small, b, b)) * determinant(schur_complement(small, b));
      det.add(std::abs(d_split - d_full) / std::abs(d_full), 1e-8);
    }
  }

  CheckReport report;
  report.suite = "schur complement algebra";
  report.seed = seed;
  const std::string params = "n=" + std::to_string(n) + " trials=" + std::to_string(trials);
  report.records.push_back(make_record("schedule-invariance", params, 1e-10, invariance,
                                       "relative Frobenius difference"));
  report.records.push_back(
      make_record("nesting", params, 1e-10, nesting, "relative Frobenius difference"));
  report.records.push_back(make_record("det-product",
                                       "n=" + std::to_string(det_n) +
                                           " trials=" + std::to_string(trials),
                                       1e-8, det, "|det B det S - det A| / |det A|"));
  return report;
}

}  // namespace rgenp
