#include "rgenp/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rgenp/errors.hpp"

namespace rgenp {

namespace {

constexpr std::size_t kJacobiCap = 1024;

// Column-major working copy: column j occupies [j*m, (j+1)*m).
struct Columns {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> data;

  double* col(std::size_t j) { return data.data() + j * m; }
  const double* col(std::size_t j) const { return data.data() + j * m; }
};

Columns to_columns(const RealMatrix& a) {
  Columns c{a.rows(), a.cols(), std::vector<double>(a.rows() * a.cols())};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.data[j * c.m + i] = a(i, j);
  return c;
}

Columns identity_columns(std::size_t n) {
  Columns c{n, n, std::vector<double>(n * n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) c.data[j * n + j] = 1.0;
  return c;
}

void rotate(double* x, double* y, std::size_t len, double c, double s) {
  for (std::size_t i = 0; i < len; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

// Hestenes sweeps on the columns of `w` (m >= n); optionally accumulates the
// same rotations into `v`.
void jacobi_sweeps(Columns& w, Columns* v, const JacobiOptions& options) {
  const std::size_t m = w.m;
  const std::size_t n = w.n;
  double worst = 0.0;
  // Columns at rounding level of ||A||_F count as zero; rotating noise
  // against a column never converges.
  double frob2 = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) frob2 += w.col(j)[i] * w.col(j)[i];
  const double negligible = frob2 * std::numeric_limits<double>::epsilon() *
                            std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    bool rotated = false;
    worst = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double* wp = w.col(p);
        const double* wq = w.col(q);
        double alpha = 0.0;
        double beta = 0.0;
        double gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += wp[i] * wp[i];
          beta += wq[i] * wq[i];
          gamma += wp[i] * wq[i];
        }
        if (alpha <= negligible || beta <= negligible || gamma == 0.0) continue;
        const double ratio = std::abs(gamma) / std::sqrt(alpha * beta);
        worst = std::max(worst, ratio);
        if (ratio <= options.tolerance) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(w.col(p), w.col(q), m, c, s);
        if (v) rotate(v->col(p), v->col(q), v->m, c, s);
      }
    }
    if (!rotated) return;
  }
  throw ConvergenceError("jacobi_svd: no convergence after " +
                             std::to_string(options.max_sweeps) +
                             " sweeps, off-diagonal residual " +
                             std::to_string(worst),
                         worst);
}

void check_jacobi_shape(const RealMatrix& a) {
  if (a.empty()) throw ShapeError("jacobi_svd: empty matrix");
  if (std::min(a.rows(), a.cols()) > kJacobiCap)
    throw ShapeError("jacobi_svd: min dimension exceeds " +
                     std::to_string(kJacobiCap));
}

struct Reflectors {
  std::size_t m = 0;
  std::vector<Vector> vs;  // vs[j] acts on rows j..m-1; empty means identity
  RealMatrix r;
};

Reflectors householder(const RealMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  RealMatrix work = a;
  Reflectors out{m, {}, RealMatrix(n, n)};
  out.vs.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector x(m - j);
    for (std::size_t i = j; i < m; ++i) x[i - j] = work(i, j);
    const double xnorm = norm2(x);
    if (xnorm == 0.0) continue;
    const double alpha = x[0] >= 0.0 ? -xnorm : xnorm;
    x[0] -= alpha;
    const double vnorm = norm2(x);
    for (double& xi : x) xi /= vnorm;
    for (std::size_t c = j; c < n; ++c) {
      double s = 0.0;
      for (std::size_t i = j; i < m; ++i) s += x[i - j] * work(i, c);
      s *= 2.0;
      for (std::size_t i = j; i < m; ++i) work(i, c) -= s * x[i - j];
    }
    out.vs[j] = std::move(x);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.r(i, j) = work(i, j);
  return out;
}

// Q * b for the reflector product Q = H_0 H_1 ... H_{n-1}.
void apply_q(const Reflectors& refl, RealMatrix& b) {
  for (std::size_t jj = refl.vs.size(); jj-- > 0;) {
    const Vector& v = refl.vs[jj];
    if (v.empty()) continue;
    for (std::size_t c = 0; c < b.cols(); ++c) {
      double s = 0.0;
      for (std::size_t i = jj; i < refl.m; ++i) s += v[i - jj] * b(i, c);
      s *= 2.0;
      for (std::size_t i = jj; i < refl.m; ++i) b(i, c) -= s * v[i - jj];
    }
  }
}

}  // namespace

QrResult householder_qr(const RealMatrix& a) {
  if (a.empty()) throw ShapeError("householder_qr: empty matrix");
  if (a.rows() < a.cols())
    throw ShapeError("householder_qr: requires rows >= cols");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Reflectors refl = householder(a);
  RealMatrix q(m, n);
  for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
  apply_q(refl, q);
  RealMatrix r = std::move(refl.r);
  for (std::size_t j = 0; j < n; ++j) {
    if (r(j, j) >= 0.0) continue;
    for (std::size_t c = j; c < n; ++c) r(j, c) = -r(j, c);
    for (std::size_t i = 0; i < m; ++i) q(i, j) = -q(i, j);
  }
  return {std::move(q), std::move(r)};
}

RealMatrix complete_orthonormal_basis(const RealMatrix& q) {
  const std::size_t m = q.rows();
  const std::size_t r = q.cols();
  if (r > m) throw ShapeError("complete_orthonormal_basis: more columns than rows");
  RealMatrix basis(m, m);
  set_block(basis, 0, 0, q);
  if (r == m) return basis;
  RealMatrix tail(m, m - r);
  for (std::size_t j = 0; j < m - r; ++j) tail(r + j, j) = 1.0;
  if (r > 0) {
    Reflectors refl = householder(q);
    apply_q(refl, tail);
  }
  set_block(basis, 0, r, tail);
  return basis;
}

SvdResult jacobi_svd(const RealMatrix& a, const JacobiOptions& options) {
  check_jacobi_shape(a);
  if (a.rows() < a.cols()) {
    SvdResult t = jacobi_svd(transpose(a), options);
    return {std::move(t.right_factor), std::move(t.singular_values),
            std::move(t.left_factor)};
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Columns w = to_columns(a);
  Columns v = identity_columns(n);
  jacobi_sweeps(w, &v, options);

  Vector norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = norm2({w.col(j), m});
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  SvdResult out;
  out.singular_values.resize(n);
  out.right_factor = RealMatrix(n, n);
  std::size_t nonzero = 0;
  const double floor = norms[order[0]] * 1e-300;
  for (std::size_t k = 0; k < n; ++k) {
    out.singular_values[k] = norms[order[k]];
    if (norms[order[k]] > floor) ++nonzero;
    for (std::size_t i = 0; i < n; ++i) out.right_factor(i, k) = v.col(order[k])[i];
  }
  RealMatrix u(m, nonzero);
  for (std::size_t k = 0; k < nonzero; ++k) {
    const double* wk = w.col(order[k]);
    for (std::size_t i = 0; i < m; ++i) u(i, k) = wk[i] / norms[order[k]];
  }
  out.left_factor = complete_orthonormal_basis(u);
  return out;
}

Vector singular_values(const RealMatrix& a, const JacobiOptions& options) {
  check_jacobi_shape(a);
  Columns w = to_columns(a.rows() >= a.cols() ? a : transpose(a));
  jacobi_sweeps(w, nullptr, options);
  Vector s(w.n);
  for (std::size_t j = 0; j < w.n; ++j) s[j] = norm2({w.col(j), w.m});
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

double spectral_norm_estimate(const RealMatrix& a, int max_iterations,
                              double relative_change) {
  if (a.empty()) throw ShapeError("spectral_norm_estimate: empty matrix");
  // Deterministic start with no special alignment to coordinate axes.
  Vector x(a.cols());
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0);
  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const double xn = norm2(x);
    if (xn == 0.0) return 0.0;
    for (double& xi : x) xi /= xn;
    Vector y = mat_vec(a, x);
    const double next = norm2(y);
    // x <- A^T y
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      auto ai = a.row(i);
      for (std::size_t j = 0; j < a.cols(); ++j) x[j] += ai[j] * y[i];
    }
    if (it > 0 && std::abs(next - estimate) <= relative_change * next) {
      return next;
    }
    estimate = next;
  }
  return estimate;
}

double spectral_norm(const RealMatrix& a) {
  if (a.empty()) throw ShapeError("spectral_norm: empty matrix");
  if (std::min(a.rows(), a.cols()) > kJacobiCap) return spectral_norm_estimate(a);
  return singular_values(a).front();
}

double inverse_norm(const RealMatrix& a) {
  if (!a.square()) throw ShapeError("inverse_norm: matrix must be square");
  const Vector s = singular_values(a);
  const double smin = s.back();
  if (!(smin > kSingularityRatio * s.front()))
    throw SingularError("inverse_norm: numerically singular (sigma_min " +
                            std::to_string(smin) + ", sigma_max " +
                            std::to_string(s.front()) + ")",
                        smin);
  return 1.0 / smin;
}

std::size_t numerical_rank(const RealMatrix& a, double tolerance) {
  const Vector s = singular_values(a);
  if (s.front() == 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [&](double x) { return x / s.front() > tolerance; }));
}

double pseudo_inverse_norm(const RealMatrix& a, double tolerance) {
  const Vector s = singular_values(a);
  if (s.front() == 0.0) return 0.0;
  double last = s.front();
  for (double x : s)
    if (x / s.front() > tolerance) last = x;
  return 1.0 / last;
}

double condition_number(const RealMatrix& a) {
  const Vector s = singular_values(a);
  return s.back() == 0.0 ? std::numeric_limits<double>::infinity()
                         : s.front() / s.back();
}

}  // namespace rgenp
