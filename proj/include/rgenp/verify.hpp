#pragma once

#include <cstddef>
#include <vector>

#include "rgenp/random.hpp"
#include "rgenp/report.hpp"

namespace rgenp {

/// Relative slack of the deterministic singular-value checks.
inline constexpr double kBoundSlack = 1e-8;

/// Singular-value bounds for products FA and AH with Gaussian F and H, on
/// random A of controlled rank with both dimensions at most `max_size`
/// (<= 32). Covers the lower bounds on sigma_j(FA) and sigma_j(AH), their
/// pseudo-inverse corollaries, the leading-block corollary, submatrix
/// interlacing, leftmost-block monotonicity and the perturbation theorem.
CheckReport check_spectral_bounds(Seed seed, std::size_t trials = 1000,
                                  std::size_t max_size = 12);

/// Inverse perturbation bound ||(A+E)^-1|| <= ||A^-1|| / (1 - ||A^-1 E||)
/// and its companion for ||(A+E)^-1 - A^-1||.
CheckReport check_perturbation(Seed seed, std::size_t trials = 1000,
                               std::size_t max_size = 12);

/// Pivot, inverse and growth bounds of GENP and block elimination on
/// G^T G + I instances.
CheckReport check_safety_bounds(Seed seed, std::size_t trials = 100, std::size_t n = 16);

/// Schedule invariance and nesting of Schur complements on n x n instances,
/// and det A = det B det S on det_n x det_n instances.
CheckReport check_schur_algebra(Seed seed, std::size_t trials = 200, std::size_t n = 16,
                                std::size_t det_n = 8);

/// Gamma function through the Lanczos approximation (g = 7, 9 terms).
double lanczos_gamma(double x);

/// Monte-Carlo frequencies against the Gaussian norm, smallest singular value
/// and condition number tail bounds at sizes up to 16.
CheckReport check_tail_bounds(Seed seed, std::size_t samples = 10000);

/// 3 sqrt(p (1 - p) / samples).
double binomial_margin(double p, std::size_t samples);

}  // namespace rgenp
