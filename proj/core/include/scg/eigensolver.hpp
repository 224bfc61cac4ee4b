#pragma once

#include "scg/operator.hpp"
#include "scg/rng.hpp"

namespace scg {

struct EvResult {
  Vec vector;           // unit
  double rayleigh = 0;  // vᵀ A v of the returned vector (unshifted operator)
  int iterations_used = 0;
  bool converged = false;  // false: budget exhausted before the internal test passed
};

// Approximate leading eigenvector: returns a unit v aiming for
// vᵀAv >= lambda_max(A) - xi. Shift-and-iterate contract: a spectral bound
// sigma >= max|lambda| from Gershgorin row sums plus sum|c_j| shifts the
// operator to A + sigma*I, and a Krylov (Lanczos, full reorthogonalization)
// iteration runs from a random unit start with the budget derived from xi
// (square-root dependence). Stops when successive Rayleigh quotients differ by
// < xi/4 and the residual ||Av - lambda v|| is <= xi; exhausting the budget
// yields a best-effort result with `converged = false`.
EvResult approx_leading_ev(const SymmetricOperator& op, double xi, Rng& rng, int max_iters);

}  // namespace scg
