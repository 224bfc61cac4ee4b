#pragma once

#include <optional>

#include "scg/dense.hpp"
#include "scg/iterate.hpp"
#include "scg/objectives.hpp"
#include "scg/solvers.hpp"

namespace scg {

// Brute-force ground truth for tests. Everything here is desk-scale by
// design and refuses beyond kDenseOracleCap.

// Euclidean projection onto the probability simplex (sort-and-threshold)
Vec simplex_projection(const Vec& w);

// Frobenius-nearest point of the spectrahedron: eigendecompose, project the
// spectrum onto the simplex, recombine
DenseMatrix exact_projection_spectrahedron(const DenseMatrix& m, int cap = kDenseOracleCap);

// convert a dense PSD trace-1 matrix into an explicit decomposition,
// dropping eigenvalues at or below `floor` and renormalizing
SpectraIterate iterate_from_dense(const DenseMatrix& x, double floor = 1e-12);

// Projected gradient descent with exact projections; the reference optimum
// for h_t. Default step size is 1/beta.
RunTrace run_projected_gradient(const Objective& obj, int steps, double step_size = 0.0);

// singular values (descending) via the eigendecomposition of the smaller Gram
Vec singular_values(const DenseMatrix& z);

// Y rewritten as sum_i b_i y_i y_iᵀ + residual_weight * W with components
// aligned one-to-one with a given decomposition of X.
struct LocalityDecomposition {
  Vec b;                        // b_i <= a_i
  std::vector<Vec> y;           // unit vectors
  double residual_weight = 0.0; // sum_j (a_j - b_j)
  std::optional<DenseMatrix> w; // defined when residual_weight > 1e-12
};

// Constructive decomposition: P projects onto Y's eigenvectors with
// eigenvalue >= tau, x~_i = P x_i, y_i = x~_i/||x~_i||, b_i = a_i (1-gamma)
// ||x~_i||², W = (Y - sum b_i y_i y_iᵀ)/residual. Requires
// gamma*tau/(1-gamma) >= ||X - Y||_F.
LocalityDecomposition locality_decomposition(const SpectraIterate& x, const DenseMatrix& y,
                                             double tau, double gamma);

struct TauGammaSchedule {
  double tau = 0.0;
  double gamma = 0.0;
};

// tau = sqrt(dist / (2 rank(Y))), gamma = sqrt(2 rank(Y) dist), clamped to [0,1]
TauGammaSchedule tau_schedule_sqrt_rank(const SpectraIterate& x, const DenseMatrix& y);
// tau = smallest nonzero eigenvalue of Y, gamma = dist / tau, clamped to [0,1]
TauGammaSchedule tau_schedule_spectral_floor(const SpectraIterate& x, const DenseMatrix& y);

// numerical quantities behind the decomposition's guarantees, for tests
struct LocalityCheck {
  bool weights_dominated = false;   // b_i <= a_i for all i
  double residual_weight = 0.0;
  double residual_bound = 0.0;      // sqrt(rank) (||Y Pperp|| + dist) + gamma
  double alignment_sum = 0.0;       // sum b_i ||x_i x_iᵀ - y_i y_iᵀ||²
  double alignment_bound = 0.0;     // 2 sqrt(rank) (||Y Pperp|| + dist)
  double w_min_eigenvalue = 0.0;    // 0 when W undefined
  double w_trace_error = 0.0;
  bool holds(double slack = 1e-9) const {
    return weights_dominated && residual_weight <= residual_bound + slack &&
           alignment_sum <= alignment_bound + slack && w_min_eigenvalue >= -1e-8 &&
           w_trace_error <= 1e-8;
  }
};

LocalityCheck verify_locality_decomposition(const SpectraIterate& x, const DenseMatrix& y,
                                            double tau, double gamma,
                                            const LocalityDecomposition& dec);

}  // namespace scg
