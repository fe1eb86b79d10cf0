#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rgenp {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
///
/// A default-constructed matrix is 0x0 and stands for "no block" (for example
/// the Schur complement left after eliminating every column).
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  RealMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static RealMatrix identity(std::size_t n);
  static RealMatrix diagonal(std::span<const double> d);
  static RealMatrix column(std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Vector column_copy(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> v);

  bool all_finite() const noexcept;

  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

RealMatrix transpose(const RealMatrix& a);
RealMatrix mat_mul(const RealMatrix& a, const RealMatrix& b);
Vector mat_vec(const RealMatrix& a, std::span<const double> x);
RealMatrix operator+(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator*(double s, const RealMatrix& a);

/// Contiguous block starting at (row0, col0).
RealMatrix submatrix(const RealMatrix& a, std::size_t row0, std::size_t col0,
                     std::size_t rows, std::size_t cols);
/// Northwestern k x l block.
RealMatrix leading_block(const RealMatrix& a, std::size_t k, std::size_t l);
void set_block(RealMatrix& dst, std::size_t row0, std::size_t col0,
               const RealMatrix& src);

double frobenius_norm(const RealMatrix& a);
double max_abs(const RealMatrix& a);
double norm2(std::span<const double> v);
/// Compensated (Neumaier) dot product.
double dot(std::span<const double> x, std::span<const double> y);

/// Text format: first line "m n", then m lines of n decimal literals, written
/// with 17 significant digits.
void write_matrix(std::ostream& out, const RealMatrix& a);
RealMatrix read_matrix(std::istream& in);
RealMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const RealMatrix& a);

}  // namespace rgenp
