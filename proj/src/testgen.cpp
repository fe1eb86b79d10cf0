#include "rgenp/testgen.hpp"

#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "rgenp/dense.hpp"
#include "rgenp/errors.hpp"
#include "rgenp/factorization.hpp"
#include "rgenp/transforms.hpp"

namespace rgenp {

namespace {

enum : std::uint64_t {
  kTagLeft = 1,
  kTagRight = 2,
  kTagB = 3,
  kTagC = 4,
  kTagD = 5,
  kTagRhs = 6,
  kTagAttempt = 0xa77e0000,
};

constexpr std::size_t kExactSpectrumCap = 256;  // leading block
constexpr std::size_t kExactFullCap = 128;       // assembled matrix
constexpr double kMinSigmaRatio = 1e-12;

RealMatrix unit_norm_toeplitz(Seed seed, std::size_t k, double& norm_before) {
  RealMatrix t = materialize(gaussian_toeplitz(seed, k, k));
  norm_before = spectral_norm(t);
  return (1.0 / norm_before) * t;
}

// sigma_max and sigma_min without a full SVD: power iteration on A^T A and on
// (A^T A)^-1 through one GEPP factorization.
std::pair<double, double> extreme_singular_estimates(const RealMatrix& a) {
  const double smax = spectral_norm_estimate(a);
  const GeppFactorization f = gepp_factor(a);
  const GeppFactorization ft = gepp_factor(transpose(a));
  Vector x(a.rows());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 + 0.25 * std::cos(double(i));
  double inv = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double xn = norm2(x);
    for (double& xi : x) xi /= xn;
    Vector y = lu_solve(f, x);
    const double next = norm2(y);
    x = lu_solve(ft, y);
    if (it > 0 && std::abs(next - inv) <= 1e-10 * next) {
      inv = next;
      break;
    }
    inv = next;
  }
  return {smax, 1.0 / inv};
}

}  // namespace

HardInstance hard_matrix(Seed seed, std::size_t n, std::size_t h) {
  if (n < 8 || !is_power_of_two(n))
    throw ShapeError("hard_matrix: n must be a power of two >= 8, got " +
                     std::to_string(n));
  const std::size_t k = n / 2;
  if (h >= k)
    throw ShapeError("hard_matrix: nullity " + std::to_string(h) +
                     " must be below n/2 = " + std::to_string(k));

  for (std::size_t attempt = 0; attempt < kGenerationAttempts; ++attempt) {
    const Seed base = attempt == 0 ? seed : seed.derive(kTagAttempt + attempt);
    HardInstance inst;
    inst.n = n;
    inst.h = h;
    inst.seed = seed;
    inst.attempts = attempt + 1;

    // A_k = U Sigma V^T with Sigma = diag(1 (k-h times), 0 (h times)).
    const RealMatrix u = random_orthonormal(base.derive(kTagLeft), k);
    const RealMatrix v = random_orthonormal(base.derive(kTagRight), k);
    const std::size_t rank = k - h;
    RealMatrix ak(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < rank; ++t) s += u(i, t) * v(j, t);
        ak(i, j) = s;
      }

    RealMatrix a(n, n);
    set_block(a, 0, 0, ak);
    set_block(a, 0, k, unit_norm_toeplitz(base.derive(kTagB), k, inst.norm_b));
    set_block(a, k, 0, unit_norm_toeplitz(base.derive(kTagC), k, inst.norm_c));
    set_block(a, k, k, unit_norm_toeplitz(base.derive(kTagD), k, inst.norm_d));

    double smax = 0.0;
    double smin = 0.0;
    if (n <= kExactFullCap) {
      const Vector s = singular_values(a);
      smax = s.front();
      smin = s.back();
    } else {
      std::tie(smax, smin) = extreme_singular_estimates(a);
    }
    if (!(smin > kMinSigmaRatio * smax)) continue;

    if (k <= kExactSpectrumCap) inst.leading_singular_values = singular_values(ak);
    inst.sigma_ratio = smin / smax;
    inst.inverse_norm = 1.0 / smin;
    inst.matrix = std::move(a);
    Vector b = gaussian_vector(base.derive(kTagRhs), n);
    const double bn = norm2(b);
    for (double& x : b) x /= bn;
    inst.rhs = std::move(b);
    return inst;
  }
  throw GenerationError("hard_matrix: no numerically nonsingular instance in " +
                        std::to_string(kGenerationAttempts) + " attempts");
}

StatsRow instance_inverse_norm_stats(std::span<const Seed> seeds, std::size_t n,
                                     std::size_t h) {
  if (seeds.size() < 10)
    throw Error("instance_inverse_norm_stats: at least 10 seeds required");
  std::vector<double> norms;
  norms.reserve(seeds.size());
  for (const Seed& s : seeds) norms.push_back(hard_matrix(s, n, h).inverse_norm);
  return summarize(norms, n, 0);
}

}  // namespace rgenp
