#include "rgenp/pipeline.hpp"

#include <cmath>
#include <limits>

#include "rgenp/errors.hpp"

namespace rgenp {

namespace {

enum : std::uint64_t { kTagLeftMultiplier = 0xf1, kTagRightMultiplier = 0xf2 };

}  // namespace

std::string to_string(MultiplierKind kind) {
  switch (kind) {
    case MultiplierKind::none: return "none";
    case MultiplierKind::gaussian: return "gaussian";
    case MultiplierKind::circulant: return "circulant";
    case MultiplierKind::toeplitz: return "toeplitz";
    case MultiplierKind::hankel: return "hankel";
    case MultiplierKind::finite_set: return "finite-set";
  }
  return "none";
}

std::optional<MultiplierKind> parse_multiplier_kind(const std::string& text) {
  for (MultiplierKind k :
       {MultiplierKind::none, MultiplierKind::gaussian, MultiplierKind::circulant,
        MultiplierKind::toeplitz, MultiplierKind::hankel, MultiplierKind::finite_set})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

std::string describe(const PreconditionPlan& plan) {
  return "left=" + to_string(plan.left) + " right=" + to_string(plan.right) +
         " refine=" + std::to_string(plan.refinement_steps);
}

FiniteSet default_multiplier_set() { return FiniteSet({-1, 1}); }

Multiplier Multiplier::draw(MultiplierKind kind, Seed seed, std::size_t n) {
  if (n == 0) throw ShapeError("Multiplier: empty size");
  Multiplier m;
  m.kind_ = kind;
  m.n_ = n;
  const bool structured_fast = n >= kFastApplyThreshold;
  switch (kind) {
    case MultiplierKind::none:
      break;
    case MultiplierKind::gaussian:
      m.op_ = gaussian_matrix(seed, n, n);
      break;
    case MultiplierKind::finite_set:
      m.op_ = finite_set_matrix(seed, n, n, default_multiplier_set());
      break;
    case MultiplierKind::circulant: {
      CirculantOperator c = gaussian_circulant(seed, n);
      if (structured_fast)
        m.op_ = std::move(c);
      else
        m.op_ = materialize(c);
      break;
    }
    case MultiplierKind::toeplitz:
    case MultiplierKind::hankel: {
      ToeplitzOperator t = gaussian_toeplitz(
          seed, n, n,
          kind == MultiplierKind::hankel ? ToeplitzKind::hankel : ToeplitzKind::toeplitz);
      if (structured_fast)
        m.op_ = std::move(t);
      else
        m.op_ = materialize(t);
      break;
    }
  }
  return m;
}

bool Multiplier::fast() const noexcept {
  return std::holds_alternative<CirculantOperator>(op_) ||
         std::holds_alternative<ToeplitzOperator>(op_);
}

RealMatrix Multiplier::apply(const RealMatrix& a, Side side) const {
  if ((side == Side::left ? a.rows() : a.cols()) != n_)
    throw ShapeError("Multiplier::apply: dimension mismatch");
  if (const auto* d = std::get_if<RealMatrix>(&op_))
    return side == Side::left ? mat_mul(*d, a) : mat_mul(a, *d);
  if (const auto* c = std::get_if<CirculantOperator>(&op_))
    return circulant_apply(*c, a, side);
  if (const auto* t = std::get_if<ToeplitzOperator>(&op_))
    return toeplitz_apply(*t, a, side);
  return a;
}

Vector Multiplier::apply(std::span<const double> x) const {
  if (x.size() != n_) throw ShapeError("Multiplier::apply: dimension mismatch");
  if (const auto* d = std::get_if<RealMatrix>(&op_)) return mat_vec(*d, x);
  if (const auto* c = std::get_if<CirculantOperator>(&op_)) return circulant_apply(*c, x);
  if (const auto* t = std::get_if<ToeplitzOperator>(&op_)) return toeplitz_apply(*t, x);
  return Vector(x.begin(), x.end());
}

RealMatrix Multiplier::dense() const {
  if (const auto* d = std::get_if<RealMatrix>(&op_)) return *d;
  if (const auto* c = std::get_if<CirculantOperator>(&op_)) return materialize(*c);
  if (const auto* t = std::get_if<ToeplitzOperator>(&op_)) return materialize(*t);
  return RealMatrix::identity(n_);
}

PreconditionedSystem::PreconditionedSystem(const RealMatrix& a,
                                           const PreconditionPlan& plan, Seed seed,
                                           MonitorNorm monitor)
    : left_(Multiplier::draw(plan.left, seed.derive(kTagLeftMultiplier), a.rows())),
      right_(Multiplier::draw(plan.right, seed.derive(kTagRightMultiplier), a.rows())),
      fah_(right_.apply(left_.apply(a, Side::left), Side::right)),
      genp_(genp_factor(fah_, plan.zero_pivot_threshold, monitor)) {}

Vector PreconditionedSystem::solve(std::span<const double> b) const {
  const Vector fb = left_.apply(b);
  const Vector y = lu_solve(genp_.factors, fb);
  return right_.apply(y);
}

double relative_residual(const RealMatrix& a, std::span<const double> x,
                         std::span<const double> b) {
  if (a.cols() != x.size() || a.rows() != b.size())
    throw ShapeError("relative_residual: dimension mismatch");
  Vector r(b.size());
  for (std::size_t i = 0; i < a.rows(); ++i) r[i] = b[i] - dot(a.row(i), x);
  return norm2(r) / norm2(b);
}

Vector refine_once(const RealMatrix& a, const PreconditionedSystem& system,
                   std::span<const double> x, std::span<const double> b) {
  if (a.cols() != x.size() || a.rows() != b.size())
    throw ShapeError("refine_once: dimension mismatch");
  Vector r(b.size());
  for (std::size_t i = 0; i < a.rows(); ++i) r[i] = b[i] - dot(a.row(i), x);
  const Vector dx = system.solve(r);
  Vector out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += dx[i];
  return out;
}

SolveOutcome preconditioned_solve(const RealMatrix& a, std::span<const double> b,
                                  const PreconditionPlan& plan, Seed seed) {
  if (!a.square() || a.empty())
    throw ShapeError("preconditioned_solve: matrix must be square and nonempty");
  if (b.size() != a.rows()) throw ShapeError("preconditioned_solve: rhs length mismatch");
  if (!(plan.zero_pivot_threshold >= 0.0))
    throw Error("preconditioned_solve: negative zero-pivot threshold");

  SolveOutcome out;
  try {
    const PreconditionedSystem system(a, plan, seed);
    out.safety = system.genp().safety;
    out.x = system.solve(b);
    out.relative_residual = relative_residual(a, out.x, b);
    out.residual_history.push_back(out.relative_residual);
    for (std::size_t s = 0; s < plan.refinement_steps; ++s) {
      out.x = refine_once(a, system, out.x, b);
      out.relative_residual = relative_residual(a, out.x, b);
      out.residual_history.push_back(out.relative_residual);
    }
  } catch (const ZeroPivotError& e) {
    out.x.clear();
    out.relative_residual = std::numeric_limits<double>::infinity();
    out.residual_history.clear();
    out.failure = SolveFailure{"zero-pivot", e.what(), e.step(), e.pivot(), plan, seed};
  }
  return out;
}

}  // namespace rgenp
