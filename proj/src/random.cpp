#include "rgenp/random.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rgenp/dense.hpp"
#include "rgenp/errors.hpp"

namespace rgenp {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t s = a ^ (b * 0xd6e8feb86659fd93ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(s);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Seed Seed::derive(std::uint64_t tag) const noexcept {
  return {master, mix(stream, tag ^ 0x5bd1e995a5a5a5a5ULL)};
}

std::optional<std::uint64_t> parse_seed(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
  const std::string digits = hex ? text.substr(2) : text;
  if (digits.empty()) return std::nullopt;
  std::uint64_t value = 0;
  const std::uint64_t base = hex ? 16 : 10;
  for (char ch : digits) {
    std::uint64_t d = 0;
    if (ch >= '0' && ch <= '9')
      d = static_cast<std::uint64_t>(ch - '0');
    else if (hex && ch >= 'a' && ch <= 'f')
      d = static_cast<std::uint64_t>(ch - 'a' + 10);
    else if (hex && ch >= 'A' && ch <= 'F')
      d = static_cast<std::uint64_t>(ch - 'A' + 10);
    else
      return std::nullopt;
    if (value > (UINT64_MAX - d) / base) return std::nullopt;
    value = value * base + d;
  }
  return value;
}

Rng::Rng(Seed seed) noexcept {
  std::uint64_t state = mix(seed.master, seed.stream);
  for (auto& s : s_) s = splitmix64(state);
}

std::uint64_t Rng::next_u64() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  // Lemire's multiply-shift with rejection of the biased low range.
  __extension__ typedef unsigned __int128 Wide;
  Wide m = static_cast<Wide>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<Wide>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::normal() noexcept {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  return u * f;
}

FiniteSet::FiniteSet(std::vector<long long> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error("FiniteSet: empty set");
  std::set<long long> unique(values_.begin(), values_.end());
  if (unique.size() != values_.size()) throw Error("FiniteSet: repeated values");
}

FiniteSet FiniteSet::range(long long lo, long long hi) {
  if (hi < lo) throw Error("FiniteSet::range: empty range");
  std::vector<long long> v;
  for (long long x = lo; x <= hi; ++x) v.push_back(x);
  return FiniteSet(std::move(v));
}

long long FiniteSet::max_abs() const noexcept {
  long long m = 0;
  for (long long x : values_) m = std::max(m, x < 0 ? -x : x);
  return m;
}

RealMatrix gaussian_matrix(Seed seed, std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw ShapeError("gaussian_matrix: empty shape");
  Rng rng(seed);
  RealMatrix g(m, n);
  for (double& x : g.data()) x = rng.normal();
  return g;
}

Vector gaussian_vector(Seed seed, std::size_t n) {
  if (n == 0) throw ShapeError("gaussian_vector: empty");
  Rng rng(seed);
  Vector v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

CirculantOperator gaussian_circulant(Seed seed, std::size_t n) {
  if (!is_power_of_two(n))
    throw ShapeError("gaussian_circulant: size " + std::to_string(n) +
                     " is not a power of two");
  return CirculantOperator(gaussian_vector(seed, n));
}

ToeplitzOperator gaussian_toeplitz(Seed seed, std::size_t m, std::size_t n,
                                   ToeplitzKind kind) {
  if (m == 0 || n == 0) throw ShapeError("gaussian_toeplitz: empty shape");
  Rng rng(seed);
  Vector col(m);
  for (double& x : col) x = rng.normal();
  Vector row(n);
  row[0] = col[0];
  for (std::size_t j = 1; j < n; ++j) row[j] = rng.normal();
  return ToeplitzOperator(std::move(col), std::move(row), kind);
}

RealMatrix random_orthonormal(Seed seed, std::size_t k) {
  if (k == 0) throw ShapeError("random_orthonormal: k must be positive");
  return householder_qr(gaussian_matrix(seed, k, k)).q_factor;
}

RealMatrix finite_set_matrix(Seed seed, std::size_t m, std::size_t n,
                             const FiniteSet& delta, FiniteSetKind kind) {
  if (m == 0 || n == 0) throw ShapeError("finite_set_matrix: empty shape");
  Rng rng(seed);
  const auto& vals = delta.values();
  auto draw = [&] {
    return static_cast<double>(vals[static_cast<std::size_t>(rng.below(vals.size()))]);
  };
  if (kind == FiniteSetKind::dense) {
    RealMatrix a(m, n);
    for (double& x : a.data()) x = draw();
    return a;
  }
  Vector col(m);
  for (double& x : col) x = draw();
  Vector row(n);
  row[0] = col[0];
  for (std::size_t j = 1; j < n; ++j) row[j] = draw();
  return materialize(ToeplitzOperator(std::move(col), std::move(row)));
}

}  // namespace rgenp
