#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rgenp/dense.hpp"
#include "rgenp/errors.hpp"
#include "rgenp/factorization.hpp"
#include "rgenp/verify.hpp"

namespace rgenp {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kMaxPerturbationCondition = 1e6;

// Running tally of one inequality family. `worst` is the largest deficit
// (rhs - lhs) measured in units of the family's scale.
struct Tally {
  explicit Tally(std::string name) : check(std::move(name)) {}

  std::string check;
  std::size_t evaluations = 0;
  std::size_t violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::string first_violation;
  bool gating = true;
  std::string note;

  void add(double deficit, const std::string& where) {
    ++evaluations;
    worst = std::max(worst, deficit);
    if (deficit > kBoundSlack) {
      if (violations == 0) first_violation = where;
      ++violations;
    }
  }

  CheckRecord record(const std::string& params) const {
    CheckRecord r;
    r.check = check;
    r.params = params;
    r.bound = kBoundSlack;
    r.observed = evaluations ? worst : 0.0;
    r.samples = evaluations;
    r.violations = violations;
    r.gating = gating;
    r.verdict = violations == 0;
    r.note = note;
    if (violations) r.note += (r.note.empty() ? "" : "; ") + ("first at " + first_violation);
    return r;
  }
};

double sigma(const Vector& s, std::size_t j) {  // 1-based, 0 past the end
  return j >= 1 && j <= s.size() ? s[j - 1] : 0.0;
}

// ||M^+|| when M has full rank min(rows, cols), otherwise nothing.
std::optional<double> full_rank_pinv(const Vector& s) {
  if (s.empty() || !(s.back() > kRankTolerance * s.front())) return std::nullopt;
  return 1.0 / s.back();
}

std::string where(std::initializer_list<std::pair<const char*, std::size_t>> kv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : kv) {
    os << (first ? "" : " ") << k << '=' << v;
    first = false;
  }
  return os.str();
}

std::size_t draw_between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

RealMatrix rank_controlled(Rng& rng, std::size_t m, std::size_t n, std::size_t rho) {
  RealMatrix x(m, rho);
  RealMatrix y(rho, n);
  for (double& v : x.data()) v = rng.normal();
  for (double& v : y.data()) v = rng.normal();
  return mat_mul(x, y);
}

RealMatrix gaussian(Rng& rng, std::size_t m, std::size_t n) {
  RealMatrix g(m, n);
  for (double& v : g.data()) v = rng.normal();
  return g;
}

struct LeadingBlockTallies {
  Tally corrected{"leading-block"};
  Tally literal{"leading-block-literal"};
  Tally to_full{"leading-block-vs-full"};
};

// ||(FA)_{k,l}^+|| against the leading-block corollary for A (m x n, m >= n,
// full column rank) and F (r x m). The literal bound uses Fhat = F S_A over
// all m columns; the corrected bound uses Fhat' = F_{k,m} S_{A_{m,l}} and
// its k x l leading block.
void leading_block_checks(const RealMatrix& a, const RealMatrix& f,
                          LeadingBlockTallies& t, const char* side) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const SvdResult svd_a = jacobi_svd(a);
  const double pinv_a = 1.0 / svd_a.singular_values.back();
  const RealMatrix fa = mat_mul(f, a);
  const RealMatrix fhat = mat_mul(f, svd_a.left_factor);
  for (std::size_t l = 1; l <= n; ++l) {
    const RealMatrix a_ml = leading_block(a, m, l);
    const SvdResult svd_l = jacobi_svd(a_ml);
    const double pinv_ml = 1.0 / svd_l.singular_values.back();
    t.to_full.add((pinv_ml - pinv_a) / pinv_a, std::string(side) + " " + where({{"l", l}}));
    for (std::size_t k = 1; k <= f.rows(); ++k) {
      const auto lhs = full_rank_pinv(singular_values(leading_block(fa, k, l)));
      if (!lhs) continue;
      const auto lit = full_rank_pinv(singular_values(leading_block(fhat, k, m)));
      if (lit) {
        const double rhs = *lit * pinv_ml;
        t.literal.add((*lhs - rhs) / rhs, std::string(side) + " " + where({{"k", k}, {"l", l}}));
      }
      const RealMatrix fk = leading_block(f, k, m);
      const RealMatrix fhat_l = leading_block(mat_mul(fk, svd_l.left_factor), k, l);
      const auto cor = full_rank_pinv(singular_values(fhat_l));
      if (cor) {
        const double rhs = *cor * pinv_ml;
        t.corrected.add((*lhs - rhs) / rhs, std::string(side) + " " + where({{"k", k}, {"l", l}}));
      }
    }
  }
}

void perturbation_trial(Rng& rng, std::size_t n, Tally& inverse_bound, Tally& difference,
                        Tally& literal, std::size_t& skipped) {
  const double scale = std::pow(10.0, 2.0 * rng.uniform() - 1.0);
  const RealMatrix a = scale * gaussian(rng, n, n);
  const RealMatrix e0 = gaussian(rng, n, n);
  const double q = 0.05 + 0.85 * rng.uniform();
  if (condition_number(a) > kMaxPerturbationCondition) {
    ++skipped;
    return;
  }
  const RealMatrix a_inv = inverse(a);
  const double a_inv_norm = spectral_norm(a_inv);
  const RealMatrix e = (q / spectral_norm(mat_mul(a_inv, e0))) * e0;
  const RealMatrix ae = a + e;
  if (condition_number(ae) > kMaxPerturbationCondition) {
    ++skipped;
    return;
  }
  const RealMatrix ae_inv = inverse(ae);
  const double lhs = spectral_norm(ae_inv);
  const double bound = a_inv_norm / (1.0 - q);
  inverse_bound.add((lhs - bound) / bound, where({{"n", n}}));
  const double rel_change = spectral_norm(ae_inv - a_inv) / a_inv_norm;
  const double standard = q / (1.0 - q);
  difference.add((rel_change - standard) / standard, where({{"n", n}}));
  literal.add((rel_change - bound) / bound, where({{"n", n}}));
}

struct PerturbationTallies {
  Tally inverse{"perturbation-inverse"};
  Tally difference{"perturbation-difference"};
  Tally literal{"perturbation-difference-literal"};
  std::size_t skipped = 0;

  PerturbationTallies() {
    literal.gating = false;
    literal.note = "right side ||A^-1|| / (1 - ||A^-1 E||) as printed";
    difference.note = "right side ||A^-1 E|| / (1 - ||A^-1 E||)";
  }

  void append(CheckReport& report, const std::string& params) const {
    for (const Tally* t : {&inverse, &difference, &literal}) {
      CheckRecord r = t->record(params);
      if (skipped) r.note += (r.note.empty() ? "" : "; ") + std::to_string(skipped) +
                             " ill-conditioned draws skipped";
      report.records.push_back(r);
    }
  }
};

void require_sizes(std::size_t trials, std::size_t max_size) {
  if (trials == 0) throw Error("spectral checks: trials must be positive");
  if (max_size < 2 || max_size > 32)
    throw Error("spectral checks: sizes must lie in [2, 32]");
}

}  // namespace

CheckReport check_spectral_bounds(Seed seed, std::size_t trials, std::size_t max_size) {
  require_sizes(trials, max_size);
  Tally eq6{"product-lower-bound-FA"};
  Tally eq7{"product-lower-bound-AH"};
  Tally cor_i{"corollary-i"};
  Tally cor_ii{"corollary-ii"};
  Tally cor_iii{"corollary-iii"};
  Tally cor_iv{"corollary-iv"};
  Tally fact2{"submatrix-interlacing"};
  Tally fact3{"leftmost-block-interlacing"};
  Tally pinv_mono{"leftmost-block-pinv"};
  LeadingBlockTallies lead;
  lead.literal.gating = false;
  lead.literal.note = "Fhat_{k,m} from the SVD of A, as printed";
  lead.corrected.note = "Fhat_{k,l} from the SVD of A_{m,l}";
  PerturbationTallies pert;
  std::size_t rank_mismatch = 0;

  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng(seed.derive(trial));
    const std::size_t m = draw_between(rng, 2, max_size);
    const std::size_t n = draw_between(rng, 2, max_size);
    const std::size_t rho = draw_between(rng, 1, std::min(m, n));
    const std::size_t r = draw_between(rng, 1, rho);
    const RealMatrix a = rank_controlled(rng, m, n, rho);
    const RealMatrix f = gaussian(rng, r, m);
    const RealMatrix h = gaussian(rng, n, r);

    const SvdResult svd = jacobi_svd(a);
    const Vector& sa = svd.singular_values;
    if (numerical_rank(a, kRankTolerance) != rho) {
      ++rank_mismatch;
      continue;
    }
    const RealMatrix fhat = mat_mul(f, svd.left_factor);
    const RealMatrix hhat = mat_mul(transpose(svd.right_factor), h);
    const RealMatrix fa = mat_mul(f, a);
    const RealMatrix ah = mat_mul(a, h);
    const Vector s_fa = singular_values(fa);
    const Vector s_ah = singular_values(ah);
    const double scale_f = sa.front() * spectral_norm(f);
    const double scale_h = sa.front() * spectral_norm(h);

    for (std::size_t k = 1; k <= m; ++k) {
      const Vector s_blk = singular_values(leading_block(fhat, r, k));
      for (std::size_t j = 1; j <= r; ++j)
        eq6.add((sigma(sa, k) * sigma(s_blk, j) - sigma(s_fa, j)) / scale_f,
                where({{"trial", trial}, {"j", j}, {"k", k}}));
    }
    for (std::size_t l = 1; l <= n; ++l) {
      const Vector s_blk = singular_values(leading_block(hhat, l, r));
      for (std::size_t j = 1; j <= r; ++j)
        eq7.add((sigma(sa, l) * sigma(s_blk, j) - sigma(s_ah, j)) / scale_h,
                where({{"trial", trial}, {"j", j}, {"l", l}}));
    }

    const double s_rho = sigma(sa, rho);
    const Vector s_h = singular_values(leading_block(hhat, rho, r));
    const Vector s_f = singular_values(leading_block(fhat, r, rho));
    cor_i.add((s_rho * sigma(s_h, r) - sigma(s_ah, r)) / scale_h, where({{"trial", trial}}));
    cor_iii.add((s_rho * sigma(s_f, r) - sigma(s_fa, r)) / scale_f, where({{"trial", trial}}));
    if (const auto lhs = full_rank_pinv(s_ah), ph = full_rank_pinv(s_h); lhs && ph) {
      const double rhs = *ph / s_rho;
      cor_ii.add((*lhs - rhs) / rhs, where({{"trial", trial}}));
    }
    if (const auto lhs = full_rank_pinv(s_fa), pf = full_rank_pinv(s_f); lhs && pf) {
      const double rhs = *pf / s_rho;
      cor_iv.add((*lhs - rhs) / rhs, where({{"trial", trial}}));
    }

    // Interlacing for leading and scattered submatrices.
    {
      const std::size_t k = draw_between(rng, 1, m);
      const std::size_t l = draw_between(rng, 1, n);
      const Vector s0 = singular_values(leading_block(a, k, l));
      for (std::size_t j = 1; j <= s0.size(); ++j)
        fact2.add((sigma(s0, j) - sigma(sa, j)) / sa.front(),
                  where({{"trial", trial}, {"j", j}}));
      std::vector<std::size_t> rows;
      std::vector<std::size_t> cols;
      for (std::size_t i = 0; i < m; ++i)
        if (rng.uniform() < 0.6) rows.push_back(i);
      for (std::size_t i = 0; i < n; ++i)
        if (rng.uniform() < 0.6) cols.push_back(i);
      if (!rows.empty() && !cols.empty()) {
        RealMatrix sub(rows.size(), cols.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
          for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = a(rows[i], cols[j]);
        const Vector s1 = singular_values(sub);
        for (std::size_t j = 1; j <= s1.size(); ++j)
          fact2.add((sigma(s1, j) - sigma(sa, j)) / sa.front(),
                    where({{"trial", trial}, {"j", j}}));
      }
    }

    // Leftmost blocks of a tall matrix: a full-rank Gaussian one, so the
    // pseudo-inverse monotonicity applies to every block.
    {
      const std::size_t rows = std::max(m, n);
      const std::size_t cols = std::min(m, n);
      const RealMatrix g = gaussian(rng, rows, cols);
      std::vector<Vector> left(cols + 1);
      for (std::size_t c = 1; c <= cols; ++c) left[c] = singular_values(leading_block(g, rows, c));
      const double top = left[cols].front();
      for (std::size_t rr = 1; rr <= cols; ++rr)
        for (std::size_t l = 0; rr + l <= cols; ++l) {
          for (std::size_t k = 1; k <= rr; ++k)
            fact3.add((sigma(left[rr + l], k + l) - sigma(left[rr], k)) / top,
                      where({{"trial", trial}, {"r", rr}, {"l", l}, {"k", k}}));
          const auto p_small = full_rank_pinv(left[rr]);
          const auto p_big = full_rank_pinv(left[rr + l]);
          if (p_small && p_big)
            pinv_mono.add((*p_small - *p_big) / *p_big,
                          where({{"trial", trial}, {"r", rr}, {"l", l}}));
        }
    }

    // Leading blocks of FA (full column rank A) and of AH (full row rank A).
    {
      const std::size_t tall = std::max(m, n);
      const std::size_t wide = std::min(m, n);
      const RealMatrix a_tall = gaussian(rng, tall, wide);
      const RealMatrix f_lead = gaussian(rng, draw_between(rng, 1, wide), tall);
      leading_block_checks(a_tall, f_lead, lead, "FA");
      const RealMatrix a_wide = gaussian(rng, wide, tall);
      const RealMatrix h_lead = gaussian(rng, tall, draw_between(rng, 1, wide));
      leading_block_checks(transpose(a_wide), transpose(h_lead), lead, "AH");
    }

    perturbation_trial(rng, draw_between(rng, 2, max_size), pert.inverse, pert.difference,
                       pert.literal, pert.skipped);
  }

  CheckReport report;
  report.suite = "spectral bounds";
  report.seed = seed;
  const std::string params = "trials=" + std::to_string(trials) +
                             " max_size=" + std::to_string(max_size);
  for (const Tally* t : {&eq6, &eq7, &cor_i, &cor_ii, &cor_iii, &cor_iv, &fact2, &fact3,
                         &pinv_mono, &lead.corrected, &lead.to_full, &lead.literal}) {
    CheckRecord r = t->record(params);
    if (rank_mismatch && t->check.rfind("product", 0) == 0)
      r.note += (r.note.empty() ? "" : "; ") + std::to_string(rank_mismatch) +
                " draws with numerical rank below construction skipped";
    report.records.push_back(r);
  }
  pert.append(report, params);
  return report;
}

CheckReport check_perturbation(Seed seed, std::size_t trials, std::size_t max_size) {
  require_sizes(trials, max_size);
  PerturbationTallies pert;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng(seed.derive(0x7e57 + trial));
    perturbation_trial(rng, draw_between(rng, 2, max_size), pert.inverse, pert.difference,
                       pert.literal, pert.skipped);
  }
  CheckReport report;
  report.suite = "inverse perturbation";
  report.seed = seed;
  pert.append(report, "trials=" + std::to_string(trials) +
                          " max_size=" + std::to_string(max_size));
  return report;
}

}  // namespace rgenp
