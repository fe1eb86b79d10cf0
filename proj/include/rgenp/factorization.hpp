#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rgenp/matrix.hpp"

namespace rgenp {

/// Which norm the safety monitor uses for Schur complements and the input.
enum class MonitorNorm {
  automatic,  // spectral up to dimension 256, Frobenius above
  spectral,
  frobenius,  // O(n^2) per step; an upper bound on the spectral norm
  none,       // record pivots only
};

/// One elimination step: the pivot (block) taken at `offset` and the Schur
/// complement left behind.
struct PivotRecord {
  std::size_t step = 0;    // 1-based
  std::size_t offset = 0;  // index of the first eliminated column
  std::size_t size = 1;    // pivot block size; 1 for GENP
  double pivot_norm = 0.0;
  double pivot_inverse_norm = 0.0;
  std::optional<double> schur_norm;
  std::optional<double> schur_inverse_norm;
  bool schur_norm_spectral = false;
};

struct SafetyReport {
  double input_norm = 0.0;                     // N = ||A||
  bool input_norm_spectral = false;
  std::optional<double> max_inverse_norm;      // N_-, verification mode only
  std::optional<double> n_plus;                // N + N_- N^2
  std::vector<PivotRecord> steps;
  double growth_factor = 0.0;                  // max_k ||S(A^(k), A)|| / ||A||
};

struct GenpFactorization {
  RealMatrix l_factor;  // unit lower triangular
  RealMatrix u_factor;  // upper triangular
};

struct GeppFactorization {
  std::vector<std::size_t> permutation;  // row i of P*A is row permutation[i] of A
  RealMatrix l_factor;
  RealMatrix u_factor;
};

/// Pivot block sizes d_1, ..., d_r of a block elimination.
struct BlockSchedule {
  std::vector<std::size_t> pivot_sizes;

  static BlockSchedule uniform(std::size_t n, std::size_t block);
  std::size_t total() const;
  /// Throws ShapeError unless every size is positive and they sum to n.
  void validate(std::size_t n) const;
};

/// Block LDU factors A = L * diag(B_1, ..., B_r) * U kept in packed form:
/// diagonal blocks hold the pivot blocks B_i, the strictly lower part the
/// multipliers D B^-1 and the strictly upper part B^-1 C.
class BlockFactorization {
 public:
  BlockFactorization(BlockSchedule schedule, RealMatrix packed,
                     std::vector<RealMatrix> pivot_inverses);

  const BlockSchedule& schedule() const noexcept { return schedule_; }
  const RealMatrix& packed() const noexcept { return packed_; }
  std::size_t dimension() const noexcept { return packed_.rows(); }
  std::span<const RealMatrix> pivot_inverses() const noexcept {
    return pivot_inverses_;
  }
  RealMatrix pivot_block(std::size_t i) const;

  RealMatrix lower() const;     // unit block lower triangular
  RealMatrix diagonal() const;  // block diagonal
  RealMatrix upper() const;     // unit block upper triangular

 private:
  std::vector<std::size_t> offsets() const;

  BlockSchedule schedule_;
  RealMatrix packed_;
  std::vector<RealMatrix> pivot_inverses_;
};

struct GenpResult {
  GenpFactorization factors;
  SafetyReport safety;
};

struct BlockResult {
  BlockFactorization factors;
  SafetyReport safety;
};

/// Gaussian elimination with no pivoting. Fails with ZeroPivotError when a
/// pivot magnitude is <= zero_pivot_threshold; tiny but nonzero pivots are
/// accepted with the default threshold of 0 and show up in the report.
GenpResult genp_factor(const RealMatrix& a, double zero_pivot_threshold = 0.0,
                       MonitorNorm monitor = MonitorNorm::automatic);

/// Partial pivoting baseline. Throws SingularError when every candidate pivot
/// in a column is below 1e-300.
GeppFactorization gepp_factor(const RealMatrix& a);

/// Recursive block elimination driven by `schedule`. Throws
/// SingularPivotBlockError when a pivot block has sigma_min <= 1e-13 sigma_max.
BlockResult block_genp_factor(const RealMatrix& a, const BlockSchedule& schedule,
                              MonitorNorm monitor = MonitorNorm::automatic);

/// S(A^(k), A) = E - D B^-1 C; the 0x0 matrix when k equals the dimension.
RealMatrix schur_complement(const RealMatrix& a, std::size_t k);

Vector lu_solve(const GenpFactorization& fact, std::span<const double> b);
Vector lu_solve(const GeppFactorization& fact, std::span<const double> b);
Vector lu_solve(const BlockFactorization& fact, std::span<const double> b);

/// Inverse assembled from the inverted block factors, U^-1 D^-1 L^-1.
RealMatrix block_inverse(const BlockFactorization& fact);

/// Dense inverse and determinant through GEPP.
RealMatrix inverse(const RealMatrix& a);
double determinant(const RealMatrix& a);

/// N, N_- and N_+ of the pivot-norm bounds for a square matrix.
struct SafetyBounds {
  double input_norm = 0.0;
  double max_inverse_norm = 0.0;
  double n_plus = 0.0;
  bool strongly_nonsingular = true;
  std::size_t first_singular_block = 0;  // 0 when none was found
  std::vector<std::size_t> inspected_sizes;
};

/// Inverts every leading block for n <= 256; above that only blocks of
/// power-of-two size and the full matrix are inspected.
SafetyBounds safety_bounds(const RealMatrix& a);

struct SafetyViolation {
  std::size_t step = 0;
  std::string quantity;
  double value = 0.0;
  double bound = 0.0;
};

struct SafetyVerdict {
  bool applicable = false;  // false when A is not strongly nonsingular
  bool verdict = false;
  SafetyBounds bounds;
  double max_pivot_ratio = 0.0;    // max recorded norm / N_+
  double max_inverse_ratio = 0.0;  // max recorded inverse norm / N_-
  double growth_factor = 0.0;
  double growth_bound = 0.0;       // (N_+ N_-)^{log2 n}
  double gepp_growth_bound = 0.0;  // 2^{n-1}
  std::vector<SafetyViolation> violations;
  std::string note;
};

inline constexpr double kSafetySlack = 1e-6;

SafetyVerdict safety_check(const RealMatrix& a, const SafetyReport& report);

}  // namespace rgenp
