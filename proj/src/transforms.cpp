#include "rgenp/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "rgenp/errors.hpp"

namespace rgenp {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {

// exp(-2 pi i k / n) for k < n/2, cached per length and thread.
const ComplexVector& twiddles(std::size_t n) {
  thread_local std::map<std::size_t, ComplexVector> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  ComplexVector w(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k)
    w[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                               static_cast<double>(n));
  return cache.emplace(n, std::move(w)).first->second;
}

}  // namespace

void fft_in_place(std::span<Complex> v, FftDirection direction,
                  FlopCounter* counter) {
  const std::size_t n = v.size();
  if (!is_power_of_two(n))
    throw ShapeError("fft: length " + std::to_string(n) + " is not a power of two");
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }

  const ComplexVector& w = twiddles(n);
  const bool inverse = direction == FftDirection::inverse;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex tw = inverse ? std::conj(w[k * stride]) : w[k * stride];
        const Complex t = tw * v[start + k + half];
        const Complex u = v[start + k];
        v[start + k] = u + t;
        v[start + k + half] = u - t;
      }
    }
  }
  // 6 for the complex multiply, 4 for the add/subtract pair.
  if (counter) {
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    counter->flops += 10u * (n / 2) * log2n;
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (Complex& x : v) x *= scale;
    if (counter) counter->flops += 2u * n;
  }
}

ComplexVector fft(ComplexVector v, FftDirection direction, FlopCounter* counter) {
  fft_in_place(v, direction, counter);
  return v;
}

namespace {

ComplexVector real_spectrum(std::span<const double> c) {
  ComplexVector s(c.begin(), c.end());
  fft_in_place(s, FftDirection::forward);
  return s;
}

// Multiplies each input by the circulant whose spectrum is `spec`; inputs are
// zero-padded to the transform length and outputs truncated to `out_len`.
// Pairs of real inputs travel as the real and imaginary parts of one complex
// vector: the circulant is real, so the two products separate again.
std::vector<Vector> convolve_many(const ComplexVector& spec,
                                  const std::vector<Vector>& inputs,
                                  std::size_t out_len, FlopCounter* counter) {
  const std::size_t len = spec.size();
  std::vector<Vector> out(inputs.size(), Vector(out_len));
  ComplexVector buf(len);
  for (std::size_t k = 0; k < inputs.size(); k += 2) {
    const Vector& re = inputs[k];
    const Vector* im = k + 1 < inputs.size() ? &inputs[k + 1] : nullptr;
    std::fill(buf.begin(), buf.end(), Complex{});
    for (std::size_t i = 0; i < re.size(); ++i) buf[i].real(re[i]);
    if (im)
      for (std::size_t i = 0; i < im->size(); ++i) buf[i].imag((*im)[i]);
    fft_in_place(buf, FftDirection::forward, counter);
    for (std::size_t i = 0; i < len; ++i) buf[i] *= spec[i];
    if (counter) counter->flops += 6u * len;
    fft_in_place(buf, FftDirection::inverse, counter);
    for (std::size_t i = 0; i < out_len; ++i) out[k][i] = buf[i].real();
    if (im)
      for (std::size_t i = 0; i < out_len; ++i) out[k + 1][i] = buf[i].imag();
  }
  return out;
}

std::vector<Vector> columns_of(const RealMatrix& a) {
  std::vector<Vector> cols(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) cols[j] = a.column_copy(j);
  return cols;
}

std::vector<Vector> rows_of(const RealMatrix& a) {
  std::vector<Vector> rows(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    rows[i].assign(a.row(i).begin(), a.row(i).end());
  return rows;
}

RealMatrix from_columns(const std::vector<Vector>& cols, std::size_t rows) {
  RealMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
  return m;
}

RealMatrix from_rows(const std::vector<Vector>& rows, std::size_t cols) {
  RealMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  return m;
}

void check_materialize(std::size_t rows, std::size_t cols) {
  if (rows > kMaterializeCap || cols > kMaterializeCap)
    throw ShapeError("materialize: dimension exceeds " + std::to_string(kMaterializeCap));
}

// First column of the power-of-two circulant that embeds the Toeplitz matrix
// with the given first column and row.
Vector embedding_column(const Vector& col, const Vector& row, std::size_t len) {
  Vector c(len, 0.0);
  for (std::size_t i = 0; i < col.size(); ++i) c[i] = col[i];
  for (std::size_t j = 1; j < row.size(); ++j) c[len - j] = row[j];
  return c;
}

}  // namespace

CirculantOperator::CirculantOperator(Vector first_column)
    : column_(std::move(first_column)) {
  if (column_.empty()) throw ShapeError("CirculantOperator: empty generator");
  // Other sizes can be materialized but not applied fast.
  if (is_power_of_two(column_.size())) spectrum_ = real_spectrum(column_);
}

double CirculantOperator::entry(std::size_t i, std::size_t j) const noexcept {
  const std::size_t n = column_.size();
  return column_[(i + n - j) % n];
}

CirculantOperator CirculantOperator::transposed() const {
  const std::size_t n = column_.size();
  Vector c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = column_[(n - k) % n];
  return CirculantOperator(std::move(c));
}

ToeplitzOperator::ToeplitzOperator(Vector first_column, Vector first_row,
                                   ToeplitzKind kind)
    : column_(std::move(first_column)), row_(std::move(first_row)), kind_(kind) {
  if (column_.empty() || row_.empty())
    throw ShapeError("ToeplitzOperator: empty generator");
  if (column_[0] != row_[0])
    throw ShapeError("ToeplitzOperator: first column and row disagree at (0,0)");
  const std::size_t len = next_power_of_two(column_.size() + row_.size() - 1);
  spectrum_ = real_spectrum(embedding_column(column_, row_, len));
  transposed_spectrum_ = real_spectrum(embedding_column(row_, column_, len));
}

double ToeplitzOperator::entry(std::size_t i, std::size_t j) const noexcept {
  if (kind_ == ToeplitzKind::hankel) i = column_.size() - 1 - i;
  return i >= j ? column_[i - j] : row_[j - i];
}

Vector ToeplitzOperator::multiply_toeplitz(std::span<const double> x,
                                           FlopCounter* counter) const {
  if (x.size() != cols()) throw ShapeError("ToeplitzOperator: dimension mismatch");
  return convolve_many(spectrum_, {Vector(x.begin(), x.end())}, rows(), counter)[0];
}

std::vector<Vector> ToeplitzOperator::multiply_toeplitz_many(
    const std::vector<Vector>& xs, bool transposed, FlopCounter* counter) const {
  const std::size_t in_len = transposed ? rows() : cols();
  for (const Vector& x : xs)
    if (x.size() != in_len) throw ShapeError("ToeplitzOperator: dimension mismatch");
  return convolve_many(transposed ? transposed_spectrum_ : spectrum_, xs,
                       transposed ? cols() : rows(), counter);
}

RealMatrix circulant_apply(const CirculantOperator& op, const RealMatrix& a,
                           Side side, FlopCounter* counter) {
  const std::size_t n = op.size();
  if (!is_power_of_two(n))
    throw ShapeError("circulant_apply: size " + std::to_string(n) +
                     " is not a power of two");
  if (side == Side::left) {
    if (a.rows() != n) throw ShapeError("circulant_apply: row count mismatch");
    return from_columns(convolve_many(op.spectrum(), columns_of(a), n, counter), n);
  }
  if (a.cols() != n) throw ShapeError("circulant_apply: column count mismatch");
  // Row r of a*C is (C^T r^T)^T.
  const CirculantOperator t = op.transposed();
  return from_rows(convolve_many(t.spectrum(), rows_of(a), n, counter), n);
}

Vector circulant_apply(const CirculantOperator& op, std::span<const double> x,
                       FlopCounter* counter) {
  if (!is_power_of_two(op.size()))
    throw ShapeError("circulant_apply: size is not a power of two");
  if (x.size() != op.size()) throw ShapeError("circulant_apply: length mismatch");
  return convolve_many(op.spectrum(), {Vector(x.begin(), x.end())}, op.size(),
                       counter)[0];
}

RealMatrix toeplitz_apply(const ToeplitzOperator& op, const RealMatrix& a,
                          Side side, FlopCounter* counter) {
  const bool hankel = op.kind() == ToeplitzKind::hankel;
  if (side == Side::left) {
    if (a.rows() != op.cols()) throw ShapeError("toeplitz_apply: row count mismatch");
    std::vector<Vector> cols = op.multiply_toeplitz_many(columns_of(a), false, counter);
    if (hankel)
      for (Vector& c : cols) std::reverse(c.begin(), c.end());
    return from_columns(cols, op.rows());
  }
  if (a.cols() != op.rows()) throw ShapeError("toeplitz_apply: column count mismatch");
  // a * (J T) = (a J) T; row r of (a J) T is (T^T (a J)_r^T)^T.
  std::vector<Vector> rows = rows_of(a);
  if (hankel)
    for (Vector& r : rows) std::reverse(r.begin(), r.end());
  return from_rows(op.multiply_toeplitz_many(rows, true, counter), op.cols());
}

Vector toeplitz_apply(const ToeplitzOperator& op, std::span<const double> x,
                      FlopCounter* counter) {
  Vector y = op.multiply_toeplitz(x, counter);
  if (op.kind() == ToeplitzKind::hankel) std::reverse(y.begin(), y.end());
  return y;
}

RealMatrix materialize(const CirculantOperator& op) {
  check_materialize(op.size(), op.size());
  RealMatrix m(op.size(), op.size());
  for (std::size_t i = 0; i < op.size(); ++i)
    for (std::size_t j = 0; j < op.size(); ++j) m(i, j) = op.entry(i, j);
  return m;
}

RealMatrix materialize(const ToeplitzOperator& op) {
  check_materialize(op.rows(), op.cols());
  RealMatrix m(op.rows(), op.cols());
  for (std::size_t i = 0; i < op.rows(); ++i)
    for (std::size_t j = 0; j < op.cols(); ++j) m(i, j) = op.entry(i, j);
  return m;
}

}  // namespace rgenp
