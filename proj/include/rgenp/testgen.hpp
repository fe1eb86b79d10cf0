#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "rgenp/matrix.hpp"
#include "rgenp/random.hpp"
#include "rgenp/stats.hpp"

namespace rgenp {

/// A nonsingular n x n system that is hard for GENP: the leading n/2 x n/2
/// block A_k = U diag(1, ..., 1, 0, ..., 0) V^T has nullity h, and the other
/// three blocks are Gaussian Toeplitz matrices scaled to unit norm.
struct HardInstance {
  RealMatrix matrix;
  Vector rhs;  // Gaussian, unit Euclidean norm
  std::size_t n = 0;
  std::size_t h = 0;
  Seed seed;
  std::size_t attempts = 1;
  double norm_b = 0.0;  // spectral norms before scaling
  double norm_c = 0.0;
  double norm_d = 0.0;
  /// Singular values of the leading block, computed when k <= 256.
  std::optional<Vector> leading_singular_values;
  /// ||A^-1|| of the assembled matrix.
  double inverse_norm = 0.0;
  double sigma_ratio = 0.0;  // sigma_min(A) / sigma_1(A)
};

inline constexpr std::size_t kDefaultNullity = 4;
inline constexpr std::size_t kGenerationAttempts = 5;

/// n even, a power of two, n >= 8, and h < n / 2. Resamples (up to five
/// attempts) when sigma_min(A) / sigma_1(A) <= 1e-12.
HardInstance hard_matrix(Seed seed, std::size_t n, std::size_t h = kDefaultNullity);

/// min / max / mean / std of ||A^-1|| over instances generated from `seeds`.
StatsRow instance_inverse_norm_stats(std::span<const Seed> seeds, std::size_t n,
                                     std::size_t h = kDefaultNullity);

}  // namespace rgenp
