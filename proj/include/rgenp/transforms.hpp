#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rgenp/matrix.hpp"

namespace rgenp {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

enum class FftDirection { forward, inverse };
enum class Side { left, right };

/// Real multiplies and adds performed by the structured kernels. Counting is
/// opt-in: pass a counter to the apply functions.
struct FlopCounter {
  std::uint64_t flops = 0;
};

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

/// Radix-2 iterative FFT. The inverse includes the 1/n scaling, so
/// inverse(forward(v)) == v up to rounding. Length must be a power of two.
void fft_in_place(std::span<Complex> v, FftDirection direction,
                  FlopCounter* counter = nullptr);
ComplexVector fft(ComplexVector v, FftDirection direction,
                  FlopCounter* counter = nullptr);

/// C = (c_{(i - j) mod n}), stored by its first column. The DFT of the
/// column is cached when n is a power of two, the only sizes applied fast.
class CirculantOperator {
 public:
  explicit CirculantOperator(Vector first_column);

  std::size_t size() const noexcept { return column_.size(); }
  const Vector& first_column() const noexcept { return column_; }
  const ComplexVector& spectrum() const noexcept { return spectrum_; }
  double entry(std::size_t i, std::size_t j) const noexcept;
  /// C^T, again circulant with first column c_{-k mod n}.
  CirculantOperator transposed() const;

 private:
  Vector column_;
  ComplexVector spectrum_;
};

enum class ToeplitzKind { toeplitz, hankel };

/// m x n Toeplitz matrix T with entry (i, j) = first_column[i - j] for i >= j
/// and first_row[j - i] otherwise. The Hankel kind is J T, T with its row
/// order reversed.
class ToeplitzOperator {
 public:
  ToeplitzOperator(Vector first_column, Vector first_row,
                   ToeplitzKind kind = ToeplitzKind::toeplitz);

  std::size_t rows() const noexcept { return column_.size(); }
  std::size_t cols() const noexcept { return row_.size(); }
  ToeplitzKind kind() const noexcept { return kind_; }
  const Vector& first_column() const noexcept { return column_; }
  const Vector& first_row() const noexcept { return row_; }
  /// Entry of the operator as applied (Hankel row reversal included).
  double entry(std::size_t i, std::size_t j) const noexcept;
  /// Size of the power-of-two circulant embedding.
  std::size_t embedding_size() const noexcept { return spectrum_.size(); }

  /// T x and T^T x for the underlying Toeplitz part (no row reversal).
  Vector multiply_toeplitz(std::span<const double> x, FlopCounter* counter) const;
  std::vector<Vector> multiply_toeplitz_many(const std::vector<Vector>& xs,
                                             bool transposed,
                                             FlopCounter* counter) const;

 private:
  Vector column_;
  Vector row_;
  ToeplitzKind kind_;
  ComplexVector spectrum_;             // embedding of T
  ComplexVector transposed_spectrum_;  // embedding of T^T
};

/// op * a (Side::left) or a * op (Side::right) through FFTs; two real
/// columns share one complex transform.
RealMatrix circulant_apply(const CirculantOperator& op, const RealMatrix& a,
                           Side side, FlopCounter* counter = nullptr);
RealMatrix toeplitz_apply(const ToeplitzOperator& op, const RealMatrix& a,
                          Side side, FlopCounter* counter = nullptr);
Vector circulant_apply(const CirculantOperator& op, std::span<const double> x,
                       FlopCounter* counter = nullptr);
Vector toeplitz_apply(const ToeplitzOperator& op, std::span<const double> x,
                      FlopCounter* counter = nullptr);

inline constexpr std::size_t kMaterializeCap = 4096;

RealMatrix materialize(const CirculantOperator& op);
RealMatrix materialize(const ToeplitzOperator& op);

}  // namespace rgenp
