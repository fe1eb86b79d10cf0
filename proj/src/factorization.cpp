#include "rgenp/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rgenp/dense.hpp"
#include "rgenp/errors.hpp"

namespace rgenp {

namespace {

constexpr std::size_t kSpectralMonitorCap = 256;

struct MonitoredNorm {
  double value = 0.0;
  bool spectral = false;
  std::optional<double> inverse_norm;  // only from the spectral path
};

MonitoredNorm monitor_norm(const RealMatrix& m, MonitorNorm kind,
                           bool want_inverse) {
  const bool spectral =
      kind == MonitorNorm::spectral ||
      (kind == MonitorNorm::automatic &&
       std::max(m.rows(), m.cols()) <= kSpectralMonitorCap);
  if (!spectral) return {frobenius_norm(m), false, std::nullopt};
  if (!m.all_finite()) return {std::numeric_limits<double>::infinity(), true, std::nullopt};
  const Vector s = singular_values(m);
  MonitoredNorm out{s.front(), true, std::nullopt};
  if (want_inverse)
    out.inverse_norm = s.back() > 0.0 ? 1.0 / s.back()
                                      : std::numeric_limits<double>::infinity();
  return out;
}

void require_square(const RealMatrix& a, const char* who) {
  if (!a.square() || a.empty())
    throw ShapeError(std::string(who) + ": matrix must be square and nonempty");
}

}  // namespace

BlockSchedule BlockSchedule::uniform(std::size_t n, std::size_t block) {
  if (block == 0) throw ShapeError("BlockSchedule::uniform: zero block size");
  BlockSchedule s;
  for (std::size_t done = 0; done < n; done += block)
    s.pivot_sizes.push_back(std::min(block, n - done));
  return s;
}

std::size_t BlockSchedule::total() const {
  return std::accumulate(pivot_sizes.begin(), pivot_sizes.end(), std::size_t{0});
}

void BlockSchedule::validate(std::size_t n) const {
  if (pivot_sizes.empty()) throw ShapeError("BlockSchedule: empty schedule");
  for (std::size_t d : pivot_sizes)
    if (d == 0) throw ShapeError("BlockSchedule: zero pivot size");
  if (total() != n)
    throw ShapeError("BlockSchedule: sizes sum to " + std::to_string(total()) +
                     ", expected " + std::to_string(n));
}

BlockFactorization::BlockFactorization(BlockSchedule schedule, RealMatrix packed,
                                       std::vector<RealMatrix> pivot_inverses)
    : schedule_(std::move(schedule)),
      packed_(std::move(packed)),
      pivot_inverses_(std::move(pivot_inverses)) {
  schedule_.validate(packed_.rows());
  if (pivot_inverses_.size() != schedule_.pivot_sizes.size())
    throw ShapeError("BlockFactorization: one inverse per pivot block required");
}

std::vector<std::size_t> BlockFactorization::offsets() const {
  std::vector<std::size_t> off(schedule_.pivot_sizes.size() + 1, 0);
  for (std::size_t i = 0; i < schedule_.pivot_sizes.size(); ++i)
    off[i + 1] = off[i] + schedule_.pivot_sizes[i];
  return off;
}

RealMatrix BlockFactorization::pivot_block(std::size_t i) const {
  const auto off = offsets();
  const std::size_t d = schedule_.pivot_sizes.at(i);
  return submatrix(packed_, off[i], off[i], d, d);
}

RealMatrix BlockFactorization::lower() const {
  const auto off = offsets();
  const std::size_t n = dimension();
  RealMatrix l = RealMatrix::identity(n);
  for (std::size_t b = 0; b + 1 < off.size(); ++b)
    for (std::size_t i = off[b + 1]; i < n; ++i)
      for (std::size_t j = off[b]; j < off[b + 1]; ++j) l(i, j) = packed_(i, j);
  return l;
}

RealMatrix BlockFactorization::diagonal() const {
  const auto off = offsets();
  RealMatrix d(dimension(), dimension());
  for (std::size_t b = 0; b + 1 < off.size(); ++b)
    for (std::size_t i = off[b]; i < off[b + 1]; ++i)
      for (std::size_t j = off[b]; j < off[b + 1]; ++j) d(i, j) = packed_(i, j);
  return d;
}

RealMatrix BlockFactorization::upper() const {
  const auto off = offsets();
  const std::size_t n = dimension();
  RealMatrix u = RealMatrix::identity(n);
  for (std::size_t b = 0; b + 1 < off.size(); ++b)
    for (std::size_t i = off[b]; i < off[b + 1]; ++i)
      for (std::size_t j = off[b + 1]; j < n; ++j) u(i, j) = packed_(i, j);
  return u;
}

GenpResult genp_factor(const RealMatrix& a, double zero_pivot_threshold,
                       MonitorNorm monitor) {
  require_square(a, "genp_factor");
  if (zero_pivot_threshold < 0.0)
    throw Error("genp_factor: negative zero-pivot threshold");
  const std::size_t n = a.rows();
  RealMatrix w = a;
  RealMatrix l = RealMatrix::identity(n);
  SafetyReport report;
  if (monitor != MonitorNorm::none) {
    const MonitoredNorm in = monitor_norm(a, monitor, false);
    report.input_norm = in.value;
    report.input_norm_spectral = in.spectral;
  }
  report.steps.reserve(n);

  for (std::size_t k = 0; k < n; ++k) {
    const double pivot = w(k, k);
    if (std::abs(pivot) <= zero_pivot_threshold)
      throw ZeroPivotError("genp_factor: pivot " + std::to_string(pivot) +
                               " at step " + std::to_string(k + 1),
                           k + 1, pivot);
    auto wk = w.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto wi = w.row(i);
      const double mult = wi[k] / pivot;
      l(i, k) = mult;
      wi[k] = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) wi[j] -= mult * wk[j];
    }
    PivotRecord rec;
    rec.step = k + 1;
    rec.offset = k;
    rec.size = 1;
    rec.pivot_norm = std::abs(pivot);
    rec.pivot_inverse_norm = 1.0 / std::abs(pivot);
    if (monitor != MonitorNorm::none && k + 1 < n) {
      const MonitoredNorm s =
          monitor_norm(submatrix(w, k + 1, k + 1, n - k - 1, n - k - 1), monitor, false);
      rec.schur_norm = s.value;
      rec.schur_norm_spectral = s.spectral;
      if (report.input_norm > 0.0)
        report.growth_factor = std::max(report.growth_factor, s.value / report.input_norm);
    }
    report.steps.push_back(rec);
  }

  RealMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) u(i, j) = w(i, j);
  return {{std::move(l), std::move(u)}, std::move(report)};
}

GeppFactorization gepp_factor(const RealMatrix& a) {
  require_square(a, "gepp_factor");
  const std::size_t n = a.rows();
  RealMatrix w = a;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(w(i, k)) > std::abs(w(best, k))) best = i;
    if (!(std::abs(w(best, k)) >= 1e-300))
      throw SingularError("gepp_factor: no usable pivot in column " +
                              std::to_string(k + 1),
                          std::abs(w(best, k)));
    if (best != k) {
      std::swap_ranges(w.row(k).begin(), w.row(k).end(), w.row(best).begin());
      std::swap(perm[k], perm[best]);
    }
    const double pivot = w(k, k);
    auto wk = w.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto wi = w.row(i);
      const double mult = wi[k] / pivot;
      wi[k] = mult;
      if (mult == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) wi[j] -= mult * wk[j];
    }
  }
  RealMatrix l = RealMatrix::identity(n);
  RealMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) (j < i ? l(i, j) : u(i, j)) = w(i, j);
  return {std::move(perm), std::move(l), std::move(u)};
}

BlockResult block_genp_factor(const RealMatrix& a, const BlockSchedule& schedule,
                              MonitorNorm monitor) {
  require_square(a, "block_genp_factor");
  const std::size_t n = a.rows();
  schedule.validate(n);
  RealMatrix packed(n, n);
  std::vector<RealMatrix> inverses;
  inverses.reserve(schedule.pivot_sizes.size());
  SafetyReport report;
  if (monitor != MonitorNorm::none) {
    const MonitoredNorm in = monitor_norm(a, monitor, false);
    report.input_norm = in.value;
    report.input_norm_spectral = in.spectral;
  }

  RealMatrix trail = a;  // current Schur complement, occupying [offset, n)
  std::size_t offset = 0;
  for (std::size_t step = 0; step < schedule.pivot_sizes.size(); ++step) {
    const std::size_t d = schedule.pivot_sizes[step];
    const std::size_t rest = trail.rows() - d;
    const RealMatrix b = submatrix(trail, 0, 0, d, d);
    const Vector sv = singular_values(b);
    if (!(sv.back() > kSingularityRatio * sv.front()))
      throw SingularPivotBlockError(
          "block_genp_factor: singular pivot block at step " +
              std::to_string(step + 1),
          step + 1, sv.back());
    RealMatrix b_inv = inverse(b);
    set_block(packed, offset, offset, b);

    PivotRecord rec;
    rec.step = step + 1;
    rec.offset = offset;
    rec.size = d;
    rec.pivot_norm = sv.front();
    rec.pivot_inverse_norm = 1.0 / sv.back();

    if (rest > 0) {
      const RealMatrix c = submatrix(trail, 0, d, d, rest);
      const RealMatrix dm = submatrix(trail, d, 0, rest, d);
      const RealMatrix e = submatrix(trail, d, d, rest, rest);
      const RealMatrix b_inv_c = mat_mul(b_inv, c);
      const RealMatrix d_b_inv = mat_mul(dm, b_inv);
      set_block(packed, offset, offset + d, b_inv_c);
      set_block(packed, offset + d, offset, d_b_inv);
      trail = e - mat_mul(dm, b_inv_c);
      if (monitor != MonitorNorm::none) {
        const MonitoredNorm s = monitor_norm(trail, monitor, true);
        rec.schur_norm = s.value;
        rec.schur_inverse_norm = s.inverse_norm;
        rec.schur_norm_spectral = s.spectral;
        if (report.input_norm > 0.0)
          report.growth_factor =
              std::max(report.growth_factor, s.value / report.input_norm);
      }
    } else {
      trail = RealMatrix();
    }
    inverses.push_back(std::move(b_inv));
    report.steps.push_back(rec);
    offset += d;
  }
  return {BlockFactorization(schedule, std::move(packed), std::move(inverses)),
          std::move(report)};
}

RealMatrix schur_complement(const RealMatrix& a, std::size_t k) {
  require_square(a, "schur_complement");
  const std::size_t n = a.rows();
  if (k > n) throw ShapeError("schur_complement: k exceeds dimension");
  if (k == n) return RealMatrix();
  if (k == 0) return a;
  const RealMatrix b = leading_block(a, k, k);
  const Vector sv = singular_values(b);
  if (!(sv.back() > kSingularityRatio * sv.front()))
    throw SingularPivotBlockError("schur_complement: singular leading block", 1,
                                  sv.back());
  const std::size_t r = n - k;
  const RealMatrix c = submatrix(a, 0, k, k, r);
  const RealMatrix d = submatrix(a, k, 0, r, k);
  const RealMatrix e = submatrix(a, k, k, r, r);
  return e - mat_mul(d, mat_mul(inverse(b), c));
}

namespace {

void forward_unit(const RealMatrix& l, Vector& y) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto li = l.row(i);
    double s = y[i];
    for (std::size_t j = 0; j < i; ++j) s -= li[j] * y[j];
    y[i] = s;
  }
}

void backward(const RealMatrix& u, Vector& x) {
  const std::size_t n = x.size();
  for (std::size_t i = n; i-- > 0;) {
    auto ui = u.row(i);
    if (ui[i] == 0.0)
      throw SingularError("lu_solve: zero diagonal in U at row " +
                              std::to_string(i + 1),
                          0.0);
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= ui[j] * x[j];
    x[i] = s / ui[i];
  }
}

}  // namespace

Vector lu_solve(const GenpFactorization& fact, std::span<const double> b) {
  if (b.size() != fact.l_factor.rows()) throw ShapeError("lu_solve: dimension mismatch");
  Vector x(b.begin(), b.end());
  forward_unit(fact.l_factor, x);
  backward(fact.u_factor, x);
  return x;
}

Vector lu_solve(const GeppFactorization& fact, std::span<const double> b) {
  if (b.size() != fact.l_factor.rows()) throw ShapeError("lu_solve: dimension mismatch");
  Vector x(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) x[i] = b[fact.permutation[i]];
  forward_unit(fact.l_factor, x);
  backward(fact.u_factor, x);
  return x;
}

Vector lu_solve(const BlockFactorization& fact, std::span<const double> b) {
  const std::size_t n = fact.dimension();
  if (b.size() != n) throw ShapeError("lu_solve: dimension mismatch");
  const auto& sizes = fact.schedule().pivot_sizes;
  std::vector<std::size_t> off(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
  const RealMatrix& p = fact.packed();

  Vector y(b.begin(), b.end());
  // L: rows of later blocks subtract multipliers times earlier block values.
  for (std::size_t blk = 0; blk < sizes.size(); ++blk)
    for (std::size_t i = off[blk + 1]; i < n; ++i)
      for (std::size_t j = off[blk]; j < off[blk + 1]; ++j) y[i] -= p(i, j) * y[j];
  // Block diagonal.
  for (std::size_t blk = 0; blk < sizes.size(); ++blk) {
    const RealMatrix& inv = fact.pivot_inverses()[blk];
    Vector z(sizes[blk], 0.0);
    for (std::size_t i = 0; i < sizes[blk]; ++i)
      for (std::size_t j = 0; j < sizes[blk]; ++j) z[i] += inv(i, j) * y[off[blk] + j];
    std::copy(z.begin(), z.end(), y.begin() + static_cast<std::ptrdiff_t>(off[blk]));
  }
  // U: backward over blocks.
  for (std::size_t blk = sizes.size(); blk-- > 0;)
    for (std::size_t i = off[blk]; i < off[blk + 1]; ++i)
      for (std::size_t j = off[blk + 1]; j < n; ++j) y[i] -= p(i, j) * y[j];
  for (double v : y)
    if (!std::isfinite(v)) throw SingularError("lu_solve: non-finite block solve", 0.0);
  return y;
}

RealMatrix block_inverse(const BlockFactorization& fact) {
  const std::size_t n = fact.dimension();
  RealMatrix inv(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    inv.set_column(j, lu_solve(fact, e));
  }
  return inv;
}

RealMatrix inverse(const RealMatrix& a) {
  const GeppFactorization f = gepp_factor(a);
  const std::size_t n = a.rows();
  RealMatrix inv(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    inv.set_column(j, lu_solve(f, e));
  }
  return inv;
}

double determinant(const RealMatrix& a) {
  require_square(a, "determinant");
  GeppFactorization f;
  try {
    f = gepp_factor(a);
  } catch (const SingularError&) {
    return 0.0;
  }
  double det = 1.0;
  for (std::size_t i = 0; i < a.rows(); ++i) det *= f.u_factor(i, i);
  // Parity of the permutation from its cycle decomposition.
  std::vector<bool> seen(a.rows(), false);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = f.permutation[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) det = -det;
  }
  return det;
}

SafetyBounds safety_bounds(const RealMatrix& a) {
  require_square(a, "safety_bounds");
  const std::size_t n = a.rows();
  SafetyBounds out;
  out.input_norm = spectral_norm(a);
  if (n <= kSpectralMonitorCap) {
    for (std::size_t j = 1; j <= n; ++j) out.inspected_sizes.push_back(j);
  } else {
    for (std::size_t j = 1; j < n; j *= 2) out.inspected_sizes.push_back(j);
    out.inspected_sizes.push_back(n);
  }
  for (std::size_t j : out.inspected_sizes) {
    const Vector s = singular_values(leading_block(a, j, j));
    if (!(s.back() > kSingularityRatio * s.front())) {
      out.strongly_nonsingular = false;
      out.first_singular_block = j;
      break;
    }
    out.max_inverse_norm = std::max(out.max_inverse_norm, 1.0 / s.back());
  }
  out.n_plus = out.input_norm + out.max_inverse_norm * out.input_norm * out.input_norm;
  return out;
}

SafetyVerdict safety_check(const RealMatrix& a, const SafetyReport& report) {
  SafetyVerdict v;
  v.bounds = safety_bounds(a);
  const std::size_t n = a.rows();
  v.gepp_growth_bound = std::pow(2.0, static_cast<double>(n) - 1.0);
  v.growth_factor = report.growth_factor;
  if (!v.bounds.strongly_nonsingular) {
    v.applicable = false;
    v.verdict = false;
    v.note = "input is not strongly nonsingular: leading " +
             std::to_string(v.bounds.first_singular_block) + "x" +
             std::to_string(v.bounds.first_singular_block) +
             " block is numerically singular";
    return v;
  }
  v.applicable = true;
  const double n_plus = v.bounds.n_plus;
  const double n_minus = v.bounds.max_inverse_norm;
  v.growth_bound = std::pow(n_plus * n_minus, std::log2(static_cast<double>(n)));

  auto check = [&](std::size_t step, const char* what, double value, double bound,
                   double& ratio) {
    ratio = std::max(ratio, value / bound);
    if (!(value <= bound * (1.0 + kSafetySlack)))
      v.violations.push_back({step, what, value, bound});
  };
  for (const PivotRecord& r : report.steps) {
    check(r.step, "pivot norm", r.pivot_norm, n_plus, v.max_pivot_ratio);
    check(r.step, "pivot inverse norm", r.pivot_inverse_norm, n_minus,
          v.max_inverse_ratio);
    if (r.schur_norm && r.schur_norm_spectral)
      check(r.step, "Schur complement norm", *r.schur_norm, n_plus, v.max_pivot_ratio);
    if (r.schur_inverse_norm)
      check(r.step, "Schur complement inverse norm", *r.schur_inverse_norm, n_minus,
            v.max_inverse_ratio);
  }
  if (!(v.growth_factor <= v.growth_bound * (1.0 + kSafetySlack)))
    v.violations.push_back({0, "growth factor", v.growth_factor, v.growth_bound});
  v.verdict = v.violations.empty();
  return v;
}

}  // namespace rgenp
