#pragma once

#include <cstddef>

#include "rgenp/matrix.hpp"

namespace rgenp {

struct SvdResult {
  RealMatrix left_factor;   // m x m orthogonal
  Vector singular_values;   // min(m, n) values, nonincreasing
  RealMatrix right_factor;  // n x n orthogonal
};

struct QrResult {
  RealMatrix q_factor;  // m x k, orthonormal columns
  RealMatrix r_factor;  // k x n, upper triangular with nonnegative diagonal
};

struct JacobiOptions {
  double tolerance = 1e-14;  // relative off-diagonal threshold per pair
  int max_sweeps = 60;
};

/// One-sided (Hestenes) Jacobi SVD with cyclic sweeps. Desk-scale kernel:
/// min(rows, cols) must not exceed 1024.
SvdResult jacobi_svd(const RealMatrix& a, const JacobiOptions& options = {});

/// Singular values only; skips accumulating the orthogonal factors.
Vector singular_values(const RealMatrix& a, const JacobiOptions& options = {});

/// Householder QR of a tall (rows >= cols) matrix, thin factors, diag(R) >= 0.
QrResult householder_qr(const RealMatrix& a);

/// Orthonormal basis of R^m whose leading columns span the columns of `q`
/// (which must already be orthonormal).
RealMatrix complete_orthonormal_basis(const RealMatrix& q);

/// sigma_1. Jacobi up to min dimension 1024, power iteration on A^T A above.
double spectral_norm(const RealMatrix& a);

/// Power iteration on A^T A; cheap estimate for "approximately unit" scaling
/// and for matrices above the Jacobi cap.
double spectral_norm_estimate(const RealMatrix& a, int max_iterations = 200,
                              double relative_change = 1e-10);

/// Numerical nonsingularity threshold: sigma_min <= ratio * sigma_max counts
/// as singular.
inline constexpr double kSingularityRatio = 1e-13;

/// 1 / sigma_min for a square, numerically nonsingular matrix. Throws
/// SingularError carrying the sigma_min estimate otherwise.
double inverse_norm(const RealMatrix& a);

/// ||A^+|| = 1 / sigma_rho with rho the numerical rank under `tolerance`.
double pseudo_inverse_norm(const RealMatrix& a, double tolerance = 1e-10);

/// Count of singular values with sigma_j / sigma_1 > tolerance.
std::size_t numerical_rank(const RealMatrix& a, double tolerance = 1e-10);

double condition_number(const RealMatrix& a);

}  // namespace rgenp
