#include "rgenp/exact.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "rgenp/errors.hpp"
#include "rgenp/verify.hpp"

namespace rgenp {

namespace {

constexpr double kExactBitBudget = 125.0;

std::vector<Int128> to_integers(const RealMatrix& m) {
  std::vector<Int128> out;
  out.reserve(m.rows() * m.cols());
  for (double v : m.data()) {
    if (!(std::abs(v) < 0x1p53) || v != std::trunc(v))
      throw ShapeError("exact determinant: entry is not a small integer");
    out.push_back(static_cast<Int128>(static_cast<long long>(v)));
  }
  return out;
}

Int128 bareiss(std::vector<Int128> a, std::size_t n) {
  if (n == 0) return 1;
  Int128 sign = 1;
  Int128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p * n + k] == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        a[i * n + j] = (a[k * n + k] * a[i * n + j] - a[i * n + k] * a[k * n + j]) / prev;
      a[i * n + k] = 0;
    }
    prev = a[k * n + k];
  }
  return sign * a[(n - 1) * n + (n - 1)];
}

}  // namespace

std::string to_string(Int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  UInt128 u = neg ? -static_cast<UInt128>(v) : static_cast<UInt128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

void require_exact_capacity(std::size_t k, long long max_abs) {
  if (k > kExactMaxOrder)
    throw OverflowRiskError("exact determinant: order " + std::to_string(k) +
                            " exceeds " + std::to_string(kExactMaxOrder));
  if (k == 0 || max_abs == 0) return;
  // Every Bareiss intermediate is a minor, bounded by Hadamard's
  // (sqrt(k) max|a|)^k; the update multiplies two of them.
  const double kd = static_cast<double>(k);
  const double minor_bits = kd * (0.5 * std::log2(kd) + std::log2(static_cast<double>(max_abs)));
  if (2.0 * minor_bits + 1.0 > kExactBitBudget)
    throw OverflowRiskError("exact determinant: entries up to " + std::to_string(max_abs) +
                            " at order " + std::to_string(k) +
                            " may overflow 128-bit intermediates");
}

Int128 exact_determinant_int(const RealMatrix& m) {
  if (!m.square()) throw ShapeError("exact determinant: matrix must be square");
  std::vector<Int128> a = to_integers(m);
  long long max_abs = 0;
  for (double v : m.data()) max_abs = std::max(max_abs, static_cast<long long>(std::abs(v)));
  require_exact_capacity(m.rows(), max_abs);
  return bareiss(std::move(a), m.rows());
}

bool strongly_nonsingular_exact(const RealMatrix& m) {
  if (!m.square()) throw ShapeError("strongly_nonsingular_exact: matrix must be square");
  for (std::size_t j = 1; j <= m.rows(); ++j)
    if (exact_determinant_int(leading_block(m, j, j)) == 0) return false;
  return true;
}

CheckReport check_finite_set_singularity(Seed seed, std::size_t k, const FiniteSet& delta,
                                         std::size_t trials) {
  if (k == 0) throw ShapeError("check_finite_set_singularity: k must be positive");
  if (delta.cardinality() > 1000)
    throw Error("check_finite_set_singularity: |delta| above 1000");
  if (trials == 0) throw Error("check_finite_set_singularity: no trials");
  require_exact_capacity(k, delta.max_abs());

  const double card = static_cast<double>(delta.cardinality());
  const double kd = static_cast<double>(k);
  const double bound_ns = 1.0 - kd / card;
  const double bound_sns = 1.0 - (kd + 1.0) * kd / (2.0 * card);

  CheckReport report;
  report.suite = "finite-set singularity";
  report.seed = seed;
  const std::string params =
      "k=" + std::to_string(k) + " |delta|=" + std::to_string(delta.cardinality());
  for (FiniteSetKind kind : {FiniteSetKind::dense, FiniteSetKind::toeplitz}) {
    const char* name = kind == FiniteSetKind::dense ? "dense" : "toeplitz";
    const Seed base = seed.derive(kind == FiniteSetKind::dense ? 0xde : 0x70);
    std::size_t nonsingular = 0;
    std::size_t strong = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const RealMatrix m = finite_set_matrix(base.derive(t), k, k, delta, kind);
      if (exact_determinant_int(m) != 0) ++nonsingular;
      if (strongly_nonsingular_exact(m)) ++strong;
    }
    const double tn = static_cast<double>(trials);
    for (const auto& [label, count, bound] :
         {std::tuple{"nonsingular", nonsingular, bound_ns},
          std::tuple{"strongly-nonsingular", strong, bound_sns}}) {
      CheckRecord r;
      r.check = std::string(label) + "-" + name;
      r.params = params;
      r.bound = bound;
      r.observed = static_cast<double>(count) / tn;
      r.margin = binomial_margin(std::clamp(bound, 0.0, 1.0), trials);
      r.samples = trials;
      r.verdict = bound <= 0.0 || r.observed >= bound - r.margin;
      r.violations = r.verdict ? 0 : 1;
      r.note = "lower bound; observed frequency must reach bound - margin";
      report.records.push_back(r);
    }
  }
  return report;
}

}  // namespace rgenp
