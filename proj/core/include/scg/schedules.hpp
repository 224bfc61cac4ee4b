#pragma once

#include <optional>

#include "scg/objectives.hpp"

namespace scg {

// eta_t = c / (3 (t + t0)); the default c = 54, t0 = 8 gives eta_t = 18/(t+8).
class StepSchedule {
 public:
  StepSchedule() : StepSchedule(54.0, 8) {}
  StepSchedule(double c, int t0);

  double eta_at(int t) const;  // t >= 1
  double c() const { return c_; }
  int t0() const { return t0_; }

 private:
  double c_;
  int t0_;
};

enum class TolMode { kTheorem, kFixedPower, kConstant };

// Eigenvector tolerance schedule xi_t. xi_0 is the initial tolerance (beta
// unless overridden). Modes:
//   theorem     — min over the closed-form branches 9*beta/(t+8),
//                 (1/6)(5*54*beta*sqrt(sqrt(2)*rank) / (alpha^{1/4}(t+8)))^{4/3},
//                 (1/6)(3*sqrt(2*2916)*beta / (sqrt(alpha)*lambda_min*(t+8)))^2;
//                 branches needing a missing hint are skipped; requires alpha > 0
//   fixed-power — xi_t = xi0 / t^p (default p = 2)
//   constant    — xi_t = xi0 for all t
class TolSchedule {
 public:
  TolSchedule() : TolSchedule(TolMode::kFixedPower, 2.0, std::nullopt) {}

  static TolSchedule theorem() { return TolSchedule(TolMode::kTheorem, 0.0, std::nullopt); }
  static TolSchedule fixed_power(double p = 2.0) {
    return TolSchedule(TolMode::kFixedPower, p, std::nullopt);
  }
  static TolSchedule constant(double value) {
    return TolSchedule(TolMode::kConstant, 0.0, value);
  }

  double xi_at(const ObjectiveParams& params, int t) const;  // t >= 0
  TolMode mode() const { return mode_; }
  double power() const { return power_; }
  std::optional<double> xi0() const { return xi0_; }

 private:
  TolSchedule(TolMode mode, double power, std::optional<double> xi0)
      : mode_(mode), power_(power), xi0_(xi0) {}

  TolMode mode_;
  double power_;
  std::optional<double> xi0_;
};

}  // namespace scg
