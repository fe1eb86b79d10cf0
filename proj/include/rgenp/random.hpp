#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rgenp/matrix.hpp"
#include "rgenp/transforms.hpp"

namespace rgenp {

/// Reproducible seed: a master value plus a sub-stream id (trial index,
/// multiplier role, ...). Equal seeds give equal sequences.
struct Seed {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  /// Independent child stream for a named role under this seed.
  Seed derive(std::uint64_t tag) const noexcept;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// Parses a decimal or 0x-prefixed hexadecimal seed.
std::optional<std::uint64_t> parse_seed(const std::string& text);

/// xoshiro256** seeded through splitmix64 of (master, stream), with
/// Marsaglia's polar method for normals.
class Rng {
 public:
  explicit Rng(Seed seed) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer in [0, bound) without modulo bias; bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  double normal() noexcept;

 private:
  std::uint64_t s_[4];
  std::optional<double> spare_;
};

/// The set Delta of integers that finite-set samplers draw from.
class FiniteSet {
 public:
  explicit FiniteSet(std::vector<long long> values);
  static FiniteSet range(long long lo, long long hi);  // inclusive

  const std::vector<long long>& values() const noexcept { return values_; }
  std::size_t cardinality() const noexcept { return values_.size(); }
  long long max_abs() const noexcept;

 private:
  std::vector<long long> values_;
};

enum class FiniteSetKind { dense, toeplitz };

RealMatrix gaussian_matrix(Seed seed, std::size_t m, std::size_t n);
Vector gaussian_vector(Seed seed, std::size_t n);
/// First column of n i.i.d. standard normals; n must be a power of two.
CirculantOperator gaussian_circulant(Seed seed, std::size_t n);
/// m + n - 1 i.i.d. standard normal generators: the first column, then
/// first-row entries 1..n-1.
ToeplitzOperator gaussian_toeplitz(Seed seed, std::size_t m, std::size_t n,
                                   ToeplitzKind kind = ToeplitzKind::toeplitz);
/// Q factor of a Gaussian k x k matrix with diag(R) >= 0 (Haar distributed).
RealMatrix random_orthonormal(Seed seed, std::size_t k);
/// Entries (dense) or Toeplitz generators drawn uniformly from delta.
RealMatrix finite_set_matrix(Seed seed, std::size_t m, std::size_t n,
                             const FiniteSet& delta,
                             FiniteSetKind kind = FiniteSetKind::dense);

}  // namespace rgenp
