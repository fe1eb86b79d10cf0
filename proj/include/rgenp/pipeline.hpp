#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rgenp/factorization.hpp"
#include "rgenp/matrix.hpp"
#include "rgenp/random.hpp"
#include "rgenp/transforms.hpp"

namespace rgenp {

enum class MultiplierKind { none, gaussian, circulant, toeplitz, hankel, finite_set };

std::string to_string(MultiplierKind kind);
/// Accepts the CLI spellings: none, gaussian, circulant, toeplitz, hankel,
/// finite-set.
std::optional<MultiplierKind> parse_multiplier_kind(const std::string& text);

struct PreconditionPlan {
  MultiplierKind left = MultiplierKind::gaussian;
  MultiplierKind right = MultiplierKind::gaussian;
  std::size_t refinement_steps = 0;
  double zero_pivot_threshold = 0.0;

  static PreconditionPlan identity() {
    return {MultiplierKind::none, MultiplierKind::none, 0, 0.0};
  }
};

std::string describe(const PreconditionPlan& plan);

/// Structured multipliers at or above this size are applied through FFTs;
/// smaller ones are multiplied densely.
inline constexpr std::size_t kFastApplyThreshold = 128;

/// Entries of finite-set multipliers.
FiniteSet default_multiplier_set();

/// An n x n random multiplier, kept in the cheapest form that can apply it.
class Multiplier {
 public:
  /// The identity when kind is none.
  static Multiplier draw(MultiplierKind kind, Seed seed, std::size_t n);

  MultiplierKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return n_; }
  bool fast() const noexcept;

  /// M * a (Side::left) or a * M (Side::right).
  RealMatrix apply(const RealMatrix& a, Side side) const;
  /// M * x.
  Vector apply(std::span<const double> x) const;
  RealMatrix dense() const;

 private:
  MultiplierKind kind_ = MultiplierKind::none;
  std::size_t n_ = 0;
  std::variant<std::monostate, RealMatrix, CirculantOperator, ToeplitzOperator> op_;
};

struct SolveFailure {
  std::string kind;  // "zero-pivot"
  std::string message;
  std::size_t step = 0;
  double pivot = 0.0;
  PreconditionPlan plan;
  Seed seed;
};

struct SolveOutcome {
  Vector x;
  double relative_residual = 0.0;
  std::vector<double> residual_history;  // refinement_steps + 1 entries
  SafetyReport safety;
  std::optional<SolveFailure> failure;
};

/// F A H factored by GENP, with the multipliers kept for solves
/// x = H (F A H)^-1 F b.
class PreconditionedSystem {
 public:
  /// Throws ZeroPivotError from the GENP run.
  PreconditionedSystem(const RealMatrix& a, const PreconditionPlan& plan, Seed seed,
                       MonitorNorm monitor = MonitorNorm::frobenius);

  const Multiplier& left() const noexcept { return left_; }
  const Multiplier& right() const noexcept { return right_; }
  const GenpResult& genp() const noexcept { return genp_; }
  const RealMatrix& preconditioned() const noexcept { return fah_; }

  Vector solve(std::span<const double> b) const;

 private:
  Multiplier left_;
  Multiplier right_;
  RealMatrix fah_;
  GenpResult genp_;
};

/// ||b - A x|| / ||b|| with compensated row dot products.
double relative_residual(const RealMatrix& a, std::span<const double> x,
                         std::span<const double> b);

/// F from seed.derive(left tag), H from seed.derive(right tag). Residuals are
/// measured against `a` and `b`, never against the preconditioned system. A
/// zero pivot is reported in `failure` with the plan and seed.
SolveOutcome preconditioned_solve(const RealMatrix& a, std::span<const double> b,
                                  const PreconditionPlan& plan, Seed seed);

/// x + H (F A H)^-1 F (b - A x).
Vector refine_once(const RealMatrix& a, const PreconditionedSystem& system,
                   std::span<const double> x, std::span<const double> b);

}  // namespace rgenp
