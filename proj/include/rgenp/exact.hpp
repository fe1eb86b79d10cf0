#pragma once

#include <cstddef>
#include <string>

#include "rgenp/matrix.hpp"
#include "rgenp/random.hpp"
#include "rgenp/report.hpp"

namespace rgenp {

__extension__ typedef __int128 Int128;
__extension__ typedef unsigned __int128 UInt128;

std::string to_string(Int128 v);

/// Largest order accepted by the exact determinant.
inline constexpr std::size_t kExactMaxOrder = 6;

/// Throws OverflowRiskError unless Bareiss elimination on a k x k integer
/// matrix with entries bounded by `max_abs` keeps every intermediate
/// (a product of two minors) inside 127 bits.
void require_exact_capacity(std::size_t k, long long max_abs);

/// Fraction-free (Bareiss) determinant of a square matrix with integer
/// entries. Throws ShapeError for non-integer entries or order above 6.
Int128 exact_determinant_int(const RealMatrix& m);

/// Exact nonzero test of every leading minor.
bool strongly_nonsingular_exact(const RealMatrix& m);

/// Frequency of nonsingular and strongly nonsingular k x k matrices with
/// entries (dense) or Toeplitz generators drawn uniformly from delta,
/// against 1 - k/|delta| and 1 - k(k+1)/(2|delta|).
CheckReport check_finite_set_singularity(Seed seed, std::size_t k, const FiniteSet& delta,
                                         std::size_t trials);

}  // namespace rgenp
