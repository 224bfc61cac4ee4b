#include "scg/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace scg {

namespace {

constexpr double kRankTol = 1e-10;

int numerical_rank(const Vec& eigenvalues) {
  int r = 0;
  for (double lambda : eigenvalues)
    if (lambda > kRankTol) ++r;
  return r;
}

double smallest_positive_eigenvalue(const Vec& eigenvalues) {
  double lmin = 0.0;
  for (double lambda : eigenvalues)
    if (lambda > kRankTol) lmin = lambda;  // eigenvalues are descending
  return lmin;
}

void check_in_spectrahedron(const EigenDecomposition& eig, const char* who) {
  if (std::abs(std::accumulate(eig.eigenvalues.begin(), eig.eigenvalues.end(), 0.0) - 1.0) > 1e-7)
    throw std::invalid_argument(std::string(who) + ": matrix must have unit trace");
  if (eig.eigenvalues.back() < -1e-8)
    throw std::invalid_argument(std::string(who) + ": matrix must be positive semidefinite");
}

}  // namespace

Vec simplex_projection(const Vec& w) {
  for (double x : w)
    if (!std::isfinite(x)) throw std::invalid_argument("simplex_projection: entries must be finite");
  Vec sorted = w;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) threshold = candidate;
  }
  Vec p(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) p[i] = std::max(w[i] - threshold, 0.0);
  return p;
}

DenseMatrix exact_projection_spectrahedron(const DenseMatrix& m, int cap) {
  EigenDecomposition eig = dense_eigendecomposition(m, cap);
  const Vec projected = simplex_projection(eig.eigenvalues);
  DenseMatrix out(m.rows(), m.cols());
  for (int j = 0; j < m.rows(); ++j)
    if (projected[static_cast<std::size_t>(j)] > 0.0)
      out.add_outer(projected[static_cast<std::size_t>(j)], eig.eigenvectors.column(j));
  return out;
}

SpectraIterate iterate_from_dense(const DenseMatrix& x, double floor) {
  EigenDecomposition eig = dense_eigendecomposition(x);
  std::vector<Component> comps;
  double sum = 0.0;
  for (int j = 0; j < x.rows(); ++j) {
    const double lambda = eig.eigenvalues[static_cast<std::size_t>(j)];
    if (lambda > floor) {
      comps.push_back({lambda, normalized(eig.eigenvectors.column(j))});
      sum += lambda;
    }
  }
  if (comps.empty())
    throw std::invalid_argument("iterate_from_dense: no eigenvalue above the floor");
  for (Component& c : comps) c.weight /= sum;
  return SpectraIterate(x.rows(), std::move(comps));
}

RunTrace run_projected_gradient(const Objective& obj, int steps, double step_size) {
  if (steps < 1) throw std::invalid_argument("run_projected_gradient: steps must be >= 1");
  const int d = obj.dim();
  const double step = step_size > 0.0 ? step_size : 1.0 / obj.params().beta;
  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&start]() {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };

  DenseMatrix x = DenseMatrix::identity(d);
  for (int i = 0; i < d; ++i) x(i, i) = 1.0 / d;

  std::vector<TraceRecord> records;
  for (int t = 1; t <= steps; ++t) {
    const double value = obj.value_at_dense(x);
    DenseMatrix grad = obj.gradient_at_dense(x);

    EigenDecomposition geig = dense_eigendecomposition(grad);
    const Vec v = geig.eigenvectors.column(d - 1);  // minimizes vᵀ grad v
    double x_dot_grad = 0.0;
    for (std::size_t i = 0; i < grad.data().size(); ++i)
      x_dot_grad += x.data()[i] * grad.data()[i];
    const double vgv = dot(v, grad.apply(v));
    const double gap = x_dot_grad - vgv;

    const int rank = numerical_rank(dense_eigendecomposition(x).eigenvalues);
    records.push_back({t, elapsed_ms(), value, gap, rank, step, step, 0.0, 0, true});

    x.add_scaled(-step, grad);
    x = exact_projection_spectrahedron(x);
  }
  return {std::move(records), iterate_from_dense(x)};
}

Vec singular_values(const DenseMatrix& z) {
  const bool wide = z.cols() > z.rows();
  const DenseMatrix a = wide ? z.transposed() : z;  // tall: rows >= cols
  const int n = a.cols();
  DenseMatrix gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int r = 0; r < a.rows(); ++r) s += a(r, i) * a(r, j);
      gram(i, j) = s;
      gram(j, i) = s;
    }
  EigenDecomposition eig = dense_eigendecomposition(gram);
  Vec sv(eig.eigenvalues.size());
  for (std::size_t i = 0; i < sv.size(); ++i) sv[i] = std::sqrt(std::max(eig.eigenvalues[i], 0.0));
  return sv;
}

LocalityDecomposition locality_decomposition(const SpectraIterate& x, const DenseMatrix& y,
                                             double tau, double gamma) {
  if (tau < 0.0 || tau > 1.0 || gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("locality_decomposition: tau and gamma must lie in [0, 1]");
  if (y.rows() != x.dim() || y.cols() != x.dim())
    throw std::invalid_argument("locality_decomposition: dimension mismatch");

  const DenseMatrix xd = x.materialize();
  const double dist = (xd - y).frobenius_norm();
  const double margin = gamma >= 1.0 ? std::numeric_limits<double>::infinity()
                                     : gamma * tau / (1.0 - gamma);
  if (margin < dist * (1.0 - 1e-9) - 1e-12)
    throw std::invalid_argument(
        "locality_decomposition precondition violated: gamma*tau/(1-gamma) = " +
        std::to_string(margin) + " must be >= ||X - Y||_F = " + std::to_string(dist));

  EigenDecomposition eig = dense_eigendecomposition(y);
  check_in_spectrahedron(eig, "locality_decomposition");

  std::vector<Vec> projector_basis;
  for (int j = 0; j < y.rows(); ++j)
    if (eig.eigenvalues[static_cast<std::size_t>(j)] >= tau)
      projector_basis.push_back(eig.eigenvectors.column(j));

  const auto& comps = x.components();
  LocalityDecomposition dec;
  dec.b.resize(comps.size());
  dec.y.resize(comps.size());
  double residual = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    Vec projected(static_cast<std::size_t>(x.dim()), 0.0);
    for (const Vec& basis : projector_basis) axpy(dot(basis, comps[i].direction), basis, projected);
    const double nrm = norm(projected);
    if (nrm <= 1e-12) {
      dec.b[i] = 0.0;
      dec.y[i] = basis_vector(x.dim(), 0);  // arbitrary fixed unit vector; contributes nothing
    } else {
      dec.b[i] = comps[i].weight * (1.0 - gamma) * nrm * nrm;
      scale(projected, 1.0 / nrm);
      dec.y[i] = std::move(projected);
    }
    residual += comps[i].weight - dec.b[i];
  }
  dec.residual_weight = residual;

  if (residual > 1e-12) {
    DenseMatrix w = y;
    for (std::size_t i = 0; i < comps.size(); ++i)
      if (dec.b[i] > 0.0) w.add_outer(-dec.b[i], dec.y[i]);
    for (double& entry : w.data()) entry /= residual;
    dec.w = std::move(w);
  }
  return dec;
}

TauGammaSchedule tau_schedule_sqrt_rank(const SpectraIterate& x, const DenseMatrix& y) {
  const double dist = (x.materialize() - y).frobenius_norm();
  const int rank = numerical_rank(dense_eigendecomposition(y).eigenvalues);
  if (rank == 0) throw std::invalid_argument("tau_schedule_sqrt_rank: Y has rank 0");
  TauGammaSchedule s;
  s.tau = std::clamp(std::sqrt(dist / (2.0 * rank)), 0.0, 1.0);
  s.gamma = std::clamp(std::sqrt(2.0 * rank * dist), 0.0, 1.0);
  return s;
}

TauGammaSchedule tau_schedule_spectral_floor(const SpectraIterate& x, const DenseMatrix& y) {
  const double dist = (x.materialize() - y).frobenius_norm();
  const double lmin = smallest_positive_eigenvalue(dense_eigendecomposition(y).eigenvalues);
  if (lmin <= 0.0) throw std::invalid_argument("tau_schedule_spectral_floor: Y has no positive eigenvalue");
  TauGammaSchedule s;
  s.tau = std::clamp(lmin, 0.0, 1.0);
  s.gamma = std::clamp(dist / lmin, 0.0, 1.0);
  return s;
}

LocalityCheck verify_locality_decomposition(const SpectraIterate& x, const DenseMatrix& y,
                                            double tau, double gamma,
                                            const LocalityDecomposition& dec) {
  const auto& comps = x.components();
  EigenDecomposition eig = dense_eigendecomposition(y);
  const int rank = numerical_rank(eig.eigenvalues);
  const double dist = (x.materialize() - y).frobenius_norm();

  double tail_sq = 0.0;
  for (double lambda : eig.eigenvalues)
    if (lambda < tau) tail_sq += lambda * lambda;
  const double y_perp = std::sqrt(tail_sq);

  LocalityCheck check;
  check.weights_dominated = true;
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (dec.b[i] > comps[i].weight + 1e-12) check.weights_dominated = false;

  check.residual_weight = dec.residual_weight;
  check.residual_bound = std::sqrt(static_cast<double>(rank)) * (y_perp + dist) + gamma;

  double alignment = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (dec.b[i] <= 0.0) continue;
    const double c = dot(comps[i].direction, dec.y[i]);
    alignment += dec.b[i] * (2.0 - 2.0 * c * c);
  }
  check.alignment_sum = alignment;
  check.alignment_bound = 2.0 * std::sqrt(static_cast<double>(rank)) * (y_perp + dist);

  if (dec.w) {
    EigenDecomposition weig = dense_eigendecomposition(*dec.w);
    check.w_min_eigenvalue = weig.eigenvalues.back();
    check.w_trace_error = std::abs(dec.w->trace() - 1.0);
  }
  return check;
}

}  // namespace scg
