#include "scg/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scg {

StepSchedule::StepSchedule(double c, int t0) : c_(c), t0_(t0) {
  if (!(c_ > 0.0)) throw std::invalid_argument("step schedule: c must be positive");
  if (t0_ < 0) throw std::invalid_argument("step schedule: t0 must be nonnegative");
  if (eta_at(1) > 2.0 + 1e-12)
    throw std::invalid_argument("step schedule: eta_1 must not exceed 2");
}

double StepSchedule::eta_at(int t) const {
  if (t < 1) throw std::invalid_argument("step schedule: t must be >= 1");
  return c_ / (3.0 * (t + t0_));
}

double TolSchedule::xi_at(const ObjectiveParams& params, int t) const {
  if (t < 0) throw std::invalid_argument("tol schedule: t must be >= 0");
  const double beta = params.beta;
  const double xi0 = xi0_.value_or(beta);
  if (t == 0) return xi0;

  switch (mode_) {
    case TolMode::kConstant:
      return xi0;
    case TolMode::kFixedPower:
      return xi0 / std::pow(static_cast<double>(t), power_);
    case TolMode::kTheorem: {
      if (!(params.alpha > 0.0))
        throw std::invalid_argument(
            "tol schedule: theorem mode needs alpha > 0 (use fixed-power instead)");
      const double tt = static_cast<double>(t) + 8.0;
      double xi = 9.0 * beta / tt;
      if (params.rank_hint) {
        const double inner = 5.0 * 54.0 * beta *
                             std::sqrt(std::sqrt(2.0) * *params.rank_hint) /
                             (std::pow(params.alpha, 0.25) * tt);
        xi = std::min(xi, std::pow(inner, 4.0 / 3.0) / 6.0);
      }
      if (params.lambda_min_hint) {
        const double inner = 3.0 * std::sqrt(2.0 * 2916.0) * beta /
                             (std::sqrt(params.alpha) * *params.lambda_min_hint * tt);
        xi = std::min(xi, inner * inner / 6.0);
      }
      return xi;
    }
  }
  throw std::logic_error("unreachable tol mode");
}

}  // namespace scg
