#include "rgenp/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "rgenp/errors.hpp"

namespace rgenp {

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols,
                       std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("RealMatrix: entry count " + std::to_string(data_.size()) +
                     " does not match " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

RealMatrix::RealMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("RealMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix RealMatrix::diagonal(std::span<const double> d) {
  RealMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

RealMatrix RealMatrix::column(std::span<const double> v) {
  return RealMatrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

Vector RealMatrix::column_copy(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void RealMatrix::set_column(std::size_t j, std::span<const double> v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

bool RealMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

RealMatrix transpose(const RealMatrix& a) {
  RealMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

RealMatrix mat_mul(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("mat_mul: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " times " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  RealMatrix c(a.rows(), b.cols());
  // i-k-j order keeps the inner loop on contiguous rows of b and c.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Vector mat_vec(const RealMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw ShapeError("mat_vec: dimension mismatch");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

namespace {

void require_same_shape(const RealMatrix& a, const RealMatrix& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(op) + ": shape mismatch");
}

}  // namespace

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
  require_same_shape(a, b, "operator+");
  RealMatrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] += bd[i];
  return c;
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  require_same_shape(a, b, "operator-");
  RealMatrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] -= bd[i];
  return c;
}

RealMatrix operator*(double s, const RealMatrix& a) {
  RealMatrix c = a;
  for (double& x : c.data()) x *= s;
  return c;
}

RealMatrix submatrix(const RealMatrix& a, std::size_t row0, std::size_t col0,
                     std::size_t rows, std::size_t cols) {
  if (row0 + rows > a.rows() || col0 + cols > a.cols())
    throw ShapeError("submatrix: block exceeds matrix bounds");
  RealMatrix s(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) s(i, j) = a(row0 + i, col0 + j);
  return s;
}

RealMatrix leading_block(const RealMatrix& a, std::size_t k, std::size_t l) {
  if (k > a.rows() || l > a.cols())
    throw ShapeError("leading_block: " + std::to_string(k) + "x" +
                     std::to_string(l) + " block of a " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " matrix");
  return submatrix(a, 0, 0, k, l);
}

void set_block(RealMatrix& dst, std::size_t row0, std::size_t col0,
               const RealMatrix& src) {
  if (row0 + src.rows() > dst.rows() || col0 + src.cols() > dst.cols())
    throw ShapeError("set_block: block exceeds matrix bounds");
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j)
      dst(row0 + i, col0 + j) = src(i, j);
}

double frobenius_norm(const RealMatrix& a) { return norm2(a.data()); }

double max_abs(const RealMatrix& a) {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

double norm2(std::span<const double> v) {
  // Scaled accumulation avoids overflow for the huge vectors GENP can emit.
  double scale = 0.0;
  double ssq = 1.0;
  for (double x : v) {
    if (x == 0.0) continue;
    const double ax = std::abs(x);
    if (!std::isfinite(ax)) return ax;
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("dot: length mismatch");
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double term = x[i] * y[i];
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

void write_matrix(std::ostream& out, const RealMatrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << a(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

RealMatrix read_matrix(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    // Blank lines and '#' metadata lines may precede the header.
    if (first != std::string::npos && line[first] != '#') break;
  }
  std::istringstream header(line);
  long long m = 0;
  long long n = 0;
  if (!(header >> m >> n) || m < 1 || n < 1)
    throw ParseError("read_matrix: bad header line '" + line + "'");
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(m * n));
  for (long long i = 0; i < m; ++i) {
    if (!std::getline(in, line))
      throw ParseError("read_matrix: expected " + std::to_string(m) +
                       " rows, got " + std::to_string(i));
    std::istringstream row(line);
    std::string token;
    long long count = 0;
    while (row >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || !std::isfinite(v))
        throw ParseError("read_matrix: bad literal '" + token + "' in row " +
                         std::to_string(i + 1));
      entries.push_back(v);
      ++count;
    }
    if (count != n)
      throw ParseError("read_matrix: row " + std::to_string(i + 1) + " has " +
                       std::to_string(count) + " entries, expected " +
                       std::to_string(n));
  }
  return RealMatrix(static_cast<std::size_t>(m), static_cast<std::size_t>(n),
                    std::move(entries));
}

RealMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_matrix(in);
}

void write_matrix_file(const std::string& path, const RealMatrix& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_matrix(out, a);
}

}  // namespace rgenp
