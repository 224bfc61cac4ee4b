#include "scg/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scg {

namespace {

// number of eigenvalues of tridiag(diag, off) strictly below x (Sturm / LDLᵀ)
int count_below(const Vec& diag, const Vec& off, int m, double x) {
  int count = 0;
  double d = diag[0] - x;
  if (d < 0.0) ++count;
  for (int i = 1; i < m; ++i) {
    double denom = d;
    if (std::abs(denom) < 1e-300) denom = (denom < 0.0) ? -1e-300 : 1e-300;
    const double b = off[static_cast<std::size_t>(i - 1)];
    d = diag[static_cast<std::size_t>(i)] - x - b * b / denom;
    if (d < 0.0) ++count;
  }
  return count;
}

double tridiag_max_eigenvalue(const Vec& diag, const Vec& off, int m, double lo_hint, double tol) {
  double lo = diag[0], hi = diag[0];
  for (int i = 0; i < m; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[static_cast<std::size_t>(i - 1)]);
    if (i < m - 1) r += std::abs(off[static_cast<std::size_t>(i)]);
    lo = std::min(lo, diag[static_cast<std::size_t>(i)] - r);
    hi = std::max(hi, diag[static_cast<std::size_t>(i)] + r);
  }
  lo = std::max(lo, lo_hint);
  if (lo > hi) lo = hi - tol;
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(diag, off, m, mid) >= m)
      hi = mid;  // every eigenvalue is below mid
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// solve (T - mu*I) w = rhs, T tridiagonal; Gaussian elimination with partial
// pivoting (fill limited to a second superdiagonal)
Vec tridiag_solve_shifted(const Vec& diag, const Vec& off, int m, double mu, Vec rhs) {
  Vec d(static_cast<std::size_t>(m)), e(static_cast<std::size_t>(m), 0.0),
      f(static_cast<std::size_t>(m), 0.0);
  Vec sub(off.begin(), off.begin() + std::max(0, m - 1));
  for (int i = 0; i < m; ++i) d[static_cast<std::size_t>(i)] = diag[static_cast<std::size_t>(i)] - mu;
  for (int i = 0; i + 1 < m; ++i) e[static_cast<std::size_t>(i)] = off[static_cast<std::size_t>(i)];

  for (int k = 0; k + 1 < m; ++k) {
    double sk = sub[static_cast<std::size_t>(k)];
    if (std::abs(sk) > std::abs(d[static_cast<std::size_t>(k)])) {
      std::swap(d[static_cast<std::size_t>(k)], sk);
      std::swap(e[static_cast<std::size_t>(k)], d[static_cast<std::size_t>(k + 1)]);
      if (k + 2 < m) std::swap(f[static_cast<std::size_t>(k)], e[static_cast<std::size_t>(k + 1)]);
      std::swap(rhs[static_cast<std::size_t>(k)], rhs[static_cast<std::size_t>(k + 1)]);
    }
    if (d[static_cast<std::size_t>(k)] == 0.0) d[static_cast<std::size_t>(k)] = 1e-300;
    const double factor = sk / d[static_cast<std::size_t>(k)];
    d[static_cast<std::size_t>(k + 1)] -= factor * e[static_cast<std::size_t>(k)];
    if (k + 2 < m) e[static_cast<std::size_t>(k + 1)] -= factor * f[static_cast<std::size_t>(k)];
    rhs[static_cast<std::size_t>(k + 1)] -= factor * rhs[static_cast<std::size_t>(k)];
  }

  Vec w(static_cast<std::size_t>(m));
  for (int i = m - 1; i >= 0; --i) {
    double s = rhs[static_cast<std::size_t>(i)];
    if (i + 1 < m) s -= e[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i + 1)];
    if (i + 2 < m) s -= f[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i + 2)];
    double piv = d[static_cast<std::size_t>(i)];
    if (piv == 0.0) piv = 1e-300;
    w[static_cast<std::size_t>(i)] = s / piv;
  }
  return w;
}

// eigenvector of the tridiagonal for (approximate) eigenvalue lambda, by two
// rounds of inverse iteration
Vec tridiag_eigenvector(const Vec& diag, const Vec& off, int m, double lambda, double magnitude) {
  if (m == 1) return Vec{1.0};
  const double pert = std::max(1e-14 * std::max(magnitude, 1.0), 1e-300);
  Vec s(static_cast<std::size_t>(m), 1.0 / std::sqrt(static_cast<double>(m)));
  for (int round = 0; round < 2; ++round) {
    s = tridiag_solve_shifted(diag, off, m, lambda + pert, std::move(s));
    const double n = norm(s);
    if (n == 0.0 || !std::isfinite(n)) {
      s.assign(static_cast<std::size_t>(m), 0.0);
      s[static_cast<std::size_t>(m - 1)] = 1.0;
      continue;
    }
    scale(s, 1.0 / n);
  }
  return s;
}

}  // namespace

EvResult approx_leading_ev(const SymmetricOperator& op, double xi, Rng& rng, int max_iters) {
  if (!(xi > 0.0)) throw std::invalid_argument("approx_leading_ev requires xi > 0");
  if (max_iters < 1) throw std::invalid_argument("approx_leading_ev requires max_iters >= 1");

  const int d = op.dim();
  const double sigma = op.spectral_bound();

  // square-root budget for the shifted Krylov iteration; the full space is
  // always enough, the caller cap always binds
  const double log_term = std::log(std::max(d, 2) / 0.01);
  int budget = static_cast<int>(std::ceil(0.5 * std::sqrt((sigma + xi) / xi) * log_term)) + 8;
  const int m_max = std::min({max_iters, d, std::max(budget, 8)});

  std::vector<Vec> basis;
  basis.reserve(static_cast<std::size_t>(m_max) + 1);
  basis.push_back(rng.unit_vector(d));

  Vec alpha, beta;  // T entries: alpha_1..alpha_j, beta_1..beta_{j-1}
  alpha.reserve(static_cast<std::size_t>(m_max));
  beta.reserve(static_cast<std::size_t>(m_max));

  const double breakdown_tol = 1e-12 * std::max(sigma, 1.0);
  double theta = -std::numeric_limits<double>::infinity();
  double theta_tol = std::min(xi / 64.0, 1e-12 * std::max(sigma, 1.0));
  if (theta_tol <= 0.0) theta_tol = 1e-300;
  Vec ritz_coeffs;
  bool have_coeffs = false;
  bool rule_fired = false;
  int j = 0;
  Vec w;

  while (j < m_max) {
    ++j;
    const Vec& q = basis[static_cast<std::size_t>(j - 1)];
    op.apply_into(q, w);
    if (sigma != 0.0) axpy(sigma, q, w);
    const double a_j = dot(w, q);
    alpha.push_back(a_j);
    axpy(-a_j, q, w);
    if (j >= 2) axpy(-beta[static_cast<std::size_t>(j - 2)], basis[static_cast<std::size_t>(j - 2)], w);
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i)
        axpy(-dot(w, basis[static_cast<std::size_t>(i)]), basis[static_cast<std::size_t>(i)], w);
    const double b_j = norm(w);

    const double prev_theta = theta;
    const double lo_hint = std::isfinite(prev_theta)
                               ? prev_theta - 4.0 * theta_tol
                               : -std::numeric_limits<double>::infinity();
    theta = tridiag_max_eigenvalue(alpha, beta, j, lo_hint, theta_tol);
    have_coeffs = false;

    if (b_j <= breakdown_tol) {
      // invariant subspace: the Ritz pair is exact within it
      rule_fired = true;
      break;
    }
    const bool stagnated = std::isfinite(prev_theta) && std::abs(theta - prev_theta) < xi / 4.0;
    if (stagnated) {
      ritz_coeffs = tridiag_eigenvector(alpha, beta, j, theta, sigma + std::abs(theta));
      have_coeffs = true;
      const double residual_est = b_j * std::abs(ritz_coeffs[static_cast<std::size_t>(j - 1)]);
      if (residual_est <= xi) {
        rule_fired = true;
        break;
      }
    }
    if (j == m_max) break;
    beta.push_back(b_j);
    Vec next = w;
    scale(next, 1.0 / b_j);
    basis.push_back(std::move(next));
  }

  if (!have_coeffs) ritz_coeffs = tridiag_eigenvector(alpha, beta, j, theta, sigma + std::abs(theta));

  Vec v(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < j; ++i) axpy(ritz_coeffs[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(i)], v);
  const double vn = norm(v);
  if (vn == 0.0 || !std::isfinite(vn)) {
    v = basis[0];
  } else {
    scale(v, 1.0 / vn);
  }

  Vec av;
  op.apply_into(v, av);
  const double rayleigh = dot(v, av);
  axpy(-rayleigh, v, av);
  const double residual = norm(av);

  EvResult out;
  out.vector = std::move(v);
  out.rayleigh = rayleigh;
  out.iterations_used = j;
  out.converged = (rule_fired || j >= d) && residual <= xi;
  return out;
}

}  // namespace scg
