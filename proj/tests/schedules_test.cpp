#include <gtest/gtest.h>

#include <cmath>

#include "scg/schedules.hpp"

namespace scg {
namespace {

TEST(StepScheduleTest, DefaultClosedForm) {
  const StepSchedule s;
  EXPECT_DOUBLE_EQ(s.eta_at(1), 2.0);    // 18/9
  EXPECT_DOUBLE_EQ(s.eta_at(10), 1.0);   // 18/18
  EXPECT_DOUBLE_EQ(s.eta_at(1000), 18.0 / 1008.0);
}

TEST(StepScheduleTest, MonotoneNonIncreasing) {
  const StepSchedule s;
  for (int t = 1; t < 500; ++t) EXPECT_GE(s.eta_at(t), s.eta_at(t + 1));
}

TEST(StepScheduleTest, RejectsStepsAboveTwo) {
  EXPECT_THROW(StepSchedule(100.0, 2), std::invalid_argument);  // eta_1 = 100/9 > 2
  EXPECT_NO_THROW(StepSchedule(54.0, 8));
  EXPECT_THROW(StepSchedule(-1.0, 8), std::invalid_argument);
  EXPECT_THROW(StepSchedule().eta_at(0), std::invalid_argument);
}

TEST(TolScheduleTest, InitialToleranceIsBeta) {
  ObjectiveParams params;
  params.alpha = 1.0;
  params.beta = 2.5;
  EXPECT_DOUBLE_EQ(TolSchedule::theorem().xi_at(params, 0), 2.5);
  EXPECT_DOUBLE_EQ(TolSchedule::fixed_power().xi_at(params, 0), 2.5);
  EXPECT_DOUBLE_EQ(TolSchedule::constant(0.3).xi_at(params, 0), 0.3);
}

TEST(TolScheduleTest, TheoremBranchOneOnly) {
  ObjectiveParams params;
  params.alpha = 1.0;
  params.beta = 1.0;
  // no hints: only 9*beta/(t+8) is available; at t = 1 that is exactly 1
  EXPECT_DOUBLE_EQ(TolSchedule::theorem().xi_at(params, 1), 1.0);
  EXPECT_DOUBLE_EQ(TolSchedule::theorem().xi_at(params, 10), 0.5);
}

TEST(TolScheduleTest, TheoremAllBranchesAgainstArithmeticOracle) {
  ObjectiveParams params;
  params.alpha = 1.0;
  params.beta = 1.0;
  params.rank_hint = 1;
  params.lambda_min_hint = 1.0;
  const int t = 100;
  const double tt = t + 8.0;

  const double branch1 = 9.0 / tt;
  const double branch2 = std::pow(5.0 * 54.0 * std::sqrt(std::sqrt(2.0) * 1.0) / tt, 4.0 / 3.0) / 6.0;
  const double branch3 = std::pow(3.0 * std::sqrt(2.0 * 2916.0) / tt, 2.0) / 6.0;
  const double expected = std::min({branch1, branch2, branch3});

  EXPECT_DOUBLE_EQ(TolSchedule::theorem().xi_at(params, t), expected);
  EXPECT_DOUBLE_EQ(expected, branch1);  // for these hints branch 1 wins at t = 100
}

TEST(TolScheduleTest, BranchSelectionDependsOnHints) {
  ObjectiveParams params;
  params.alpha = 1.0;
  params.beta = 1.0;
  params.lambda_min_hint = 0.5;
  // branch 3 at large t shrinks like 1/t² and must eventually undercut branch 1
  const double with_hint = TolSchedule::theorem().xi_at(params, 100000);
  params.lambda_min_hint.reset();
  const double without_hint = TolSchedule::theorem().xi_at(params, 100000);
  EXPECT_LT(with_hint, without_hint);
}

TEST(TolScheduleTest, TheoremModeRequiresAlpha) {
  ObjectiveParams params;  // alpha = 0
  EXPECT_THROW(TolSchedule::theorem().xi_at(params, 1), std::invalid_argument);
}

TEST(TolScheduleTest, FixedPowerAndConstant) {
  ObjectiveParams params;
  params.beta = 2.0;
  EXPECT_DOUBLE_EQ(TolSchedule::fixed_power(2.0).xi_at(params, 4), 2.0 / 16.0);
  EXPECT_DOUBLE_EQ(TolSchedule::fixed_power(1.0).xi_at(params, 4), 0.5);
  EXPECT_DOUBLE_EQ(TolSchedule::constant(0.125).xi_at(params, 1234), 0.125);
}

TEST(TolScheduleTest, NonIncreasingInT) {
  ObjectiveParams params;
  params.alpha = 0.25;
  params.beta = 1.5;
  params.rank_hint = 3;
  params.lambda_min_hint = 0.2;
  for (const TolSchedule& s :
       {TolSchedule::theorem(), TolSchedule::fixed_power(1.5), TolSchedule::constant(0.1)}) {
    double prev = s.xi_at(params, 0);
    for (int t = 1; t <= 200; ++t) {
      const double xi = s.xi_at(params, t);
      EXPECT_GT(xi, 0.0);
      EXPECT_LE(xi, prev + 1e-15);
      prev = xi;
    }
  }
}

}  // namespace
}  // namespace scg
