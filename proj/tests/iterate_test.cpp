#include <gtest/gtest.h>

#include <cmath>

#include "scg/iterate.hpp"
#include "scg/schedules.hpp"
#include "test_support.hpp"

namespace scg {
namespace {

void expect_valid(const SpectraIterate& it) {
  EXPECT_NEAR(it.weight_sum(), 1.0, 1e-9);
  EXPECT_GT(it.min_weight(), 0.0);
  for (const Component& c : it.components()) EXPECT_NEAR(norm(c.direction), 1.0, 1e-10);
}

TEST(SpectraIterateTest, SingleComponentMaterializes) {
  const auto it = SpectraIterate::rank_one(basis_vector(2, 0));
  const DenseMatrix m = it.materialize();
  EXPECT_DOUBLE_EQ(m(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(m(1, 1), 0.0);
}

TEST(SpectraIterateTest, TwoComponentsMaterializeToDiagonal) {
  SpectraIterate it(2, {{0.5, basis_vector(2, 0)}, {0.5, basis_vector(2, 1)}});
  const DenseMatrix m = it.materialize();
  EXPECT_DOUBLE_EQ(m(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(m(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(m(0, 1), 0.0);
}

TEST(SpectraIterateTest, RandomIterateIsFeasible) {
  Rng rng(5);
  const auto it = test::random_iterate(8, 5, rng);
  expect_valid(it);
  const DenseMatrix m = it.materialize();
  EXPECT_NEAR(m.trace(), 1.0, 1e-9);
  const auto eig = dense_eigendecomposition(m);
  EXPECT_GE(eig.eigenvalues.back(), -1e-10);
}

TEST(SpectraIterateTest, FrobeniusCacheMatchesMaterialization) {
  Rng rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    auto it = test::random_iterate(10, 1 + rep, rng);
    const double direct = it.materialize().frobenius_norm();
    EXPECT_NEAR(it.frobenius_norm_sq(), direct * direct, 1e-12);
  }
}

TEST(SpectraIterateTest, RejectsInvalidConstruction) {
  EXPECT_THROW(SpectraIterate(2, {}), std::invalid_argument);
  EXPECT_THROW(SpectraIterate(2, {{0.5, basis_vector(2, 0)}}), std::invalid_argument);
  EXPECT_THROW(SpectraIterate(2, {{1.0, {1.0, 1.0}}}), std::invalid_argument);
  EXPECT_THROW(SpectraIterate(2, {{1.0, basis_vector(3, 0)}}), std::invalid_argument);
}

TEST(SampleComponentTest, SingleComponentAlwaysZero) {
  const auto it = SpectraIterate::rank_one(basis_vector(3, 1));
  Rng rng(1);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_component(it, rng), 0u);
}

TEST(SampleComponentTest, MatchesWeightsEmpirically) {
  SpectraIterate it(2, {{0.5, basis_vector(2, 0)}, {0.5, basis_vector(2, 1)}});
  Rng rng(123);
  int count0 = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i)
    if (sample_component(it, rng) == 0) ++count0;
  const double freq = static_cast<double>(count0) / draws;
  EXPECT_GE(freq, 0.47);
  EXPECT_LE(freq, 0.53);
}

TEST(SampleComponentTest, TinyMassDrawnAtMatchingRate) {
  const double tiny = 1e-3;
  SpectraIterate it(2, {{1.0 - tiny, basis_vector(2, 0)}, {tiny, basis_vector(2, 1)}});
  Rng rng(321);
  int hits = 0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i)
    if (sample_component(it, rng) == 1) ++hits;
  // 3 sigma of Binomial(1e6, 1e-3): 1000 +- 95
  EXPECT_GE(hits, 1000 - 95);
  EXPECT_LE(hits, 1000 + 95);
}

TEST(GreedyComponentTest, PicksLargestQuadraticForm) {
  SpectraIterate it(2, {{0.5, basis_vector(2, 0)}, {0.5, basis_vector(2, 1)}});
  auto grad = SymmetricOperator::from_diagonal({1.0, 2.0});
  EXPECT_EQ(greedy_component(it, grad), 1u);
}

TEST(GreedyComponentTest, ZeroGradientTieBreaksLowestIndex) {
  SpectraIterate it(2, {{0.5, basis_vector(2, 0)}, {0.5, basis_vector(2, 1)}});
  EXPECT_EQ(greedy_component(it, SymmetricOperator::zero(2)), 0u);
}

TEST(GreedyComponentTest, AgreesWithBruteForce) {
  Rng rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    const auto it = test::random_iterate(10, 6, rng);
    const auto grad = test::random_sparse_operator(10, 0.4, 1, rng);
    const DenseMatrix g = grad.materialize();
    std::size_t best = 0;
    double best_val = -1e300;
    for (std::size_t i = 0; i < it.size(); ++i) {
      const Vec& x = it.components()[i].direction;
      const double v = dot(x, g.apply(x));
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    EXPECT_EQ(greedy_component(it, grad), best);
  }
}

TEST(EtaTildeTest, PaperRule) {
  EXPECT_DOUBLE_EQ(eta_tilde(0.5, 0.4), 0.2);   // a >= eta: half step
  EXPECT_DOUBLE_EQ(eta_tilde(0.1, 0.4), 0.1);   // a < eta: whole weight
  EXPECT_DOUBLE_EQ(eta_tilde(0.3, 0.3), 0.15);  // boundary counts as a >= eta
  EXPECT_THROW(eta_tilde(0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(eta_tilde(0.5, 2.5), std::invalid_argument);
}

TEST(RankOneStepTest, SplitsMass) {
  const auto it = SpectraIterate::rank_one(basis_vector(2, 0));
  const auto next = apply_rank_one_step(it, 0, basis_vector(2, 1), 0.5);
  ASSERT_EQ(next.size(), 2u);
  EXPECT_DOUBLE_EQ(next.components()[0].weight, 0.5);
  EXPECT_DOUBLE_EQ(next.components()[1].weight, 0.5);
  expect_valid(next);
}

TEST(RankOneStepTest, FullMassTransferDropsOldComponent) {
  const auto it = SpectraIterate::rank_one(basis_vector(2, 0));
  const auto next = apply_rank_one_step(it, 0, basis_vector(2, 1), 1.0);
  ASSERT_EQ(next.size(), 1u);
  EXPECT_DOUBLE_EQ(next.components()[0].weight, 1.0);
  EXPECT_DOUBLE_EQ(next.components()[0].direction[1], 1.0);
}

TEST(RankOneStepTest, RejectsStepAboveWeight) {
  SpectraIterate it(2, {{0.6, basis_vector(2, 0)}, {0.4, basis_vector(2, 1)}});
  EXPECT_THROW(apply_rank_one_step(it, 1, basis_vector(2, 0), 0.5), std::invalid_argument);
}

TEST(RankOneStepTest, MatchesDenseUpdateFormula) {
  Rng rng(31);
  for (int rep = 0; rep < 12; ++rep) {
    const int d = 8;
    const auto it = test::random_iterate(d, 4, rng);
    const std::size_t idx = static_cast<std::size_t>(rng.uniform() * 4);
    const Vec v = rng.unit_vector(d);
    const double s = it.components()[idx].weight * rng.uniform();
    const auto next = apply_rank_one_step(it, idx, v, s);

    DenseMatrix expected = it.materialize();
    expected.add_outer(s, v);
    expected.add_outer(-s, it.components()[idx].direction);
    EXPECT_LE((next.materialize() - expected).frobenius_norm(), 1e-12);
    EXPECT_NEAR(next.frobenius_norm_sq(), std::pow(expected.frobenius_norm(), 2), 1e-12);
    expect_valid(next);
  }
}

TEST(GlobalStepTest, BlendsTowardNewAtom) {
  const auto it = SpectraIterate::rank_one(basis_vector(2, 0));
  const auto half = cg_global_step(it, basis_vector(2, 1), 0.5);
  ASSERT_EQ(half.size(), 2u);
  EXPECT_DOUBLE_EQ(half.components()[0].weight, 0.5);

  const auto full = cg_global_step(it, basis_vector(2, 1), 1.0);
  ASSERT_EQ(full.size(), 1u);
  EXPECT_DOUBLE_EQ(full.components()[0].direction[1], 1.0);

  const auto none = cg_global_step(it, basis_vector(2, 1), 0.0);
  ASSERT_EQ(none.size(), 1u);
  EXPECT_DOUBLE_EQ(none.components()[0].direction[0], 1.0);
}

TEST(GlobalStepTest, MatchesDenseUpdateFormula) {
  Rng rng(33);
  const auto it = test::random_iterate(6, 3, rng);
  const Vec v = rng.unit_vector(6);
  const double s = 0.37;
  const auto next = cg_global_step(it, v, s);
  DenseMatrix expected = it.materialize();
  for (double& x : expected.data()) x *= (1.0 - s);
  expected.add_outer(s, v);
  EXPECT_LE((next.materialize() - expected).frobenius_norm(), 1e-12);
  EXPECT_NEAR(next.frobenius_norm_sq(), std::pow(expected.frobenius_norm(), 2), 1e-12);
}

TEST(AwayStepTest, DropStepRemovesAtom) {
  SpectraIterate it(2, {{0.5, basis_vector(2, 0)}, {0.5, basis_vector(2, 1)}});
  const auto next = apply_away_step(it, 1, 1.0);  // cap: a/(1-a) = 1
  ASSERT_EQ(next.size(), 1u);
  EXPECT_DOUBLE_EQ(next.components()[0].weight, 1.0);
  EXPECT_DOUBLE_EQ(next.components()[0].direction[0], 1.0);
}

TEST(AwayStepTest, ZeroStepIsIdentity) {
  SpectraIterate it(2, {{0.5, basis_vector(2, 0)}, {0.5, basis_vector(2, 1)}});
  const auto next = apply_away_step(it, 0, 0.0);
  EXPECT_EQ(next.size(), 2u);
  EXPECT_DOUBLE_EQ(next.components()[0].weight, 0.5);
}

TEST(AwayStepTest, RejectsBeyondCapAndSingleComponent) {
  SpectraIterate it(2, {{0.75, basis_vector(2, 0)}, {0.25, basis_vector(2, 1)}});
  EXPECT_THROW(apply_away_step(it, 1, 0.4), std::invalid_argument);  // cap = 1/3
  const auto single = SpectraIterate::rank_one(basis_vector(2, 0));
  EXPECT_THROW(apply_away_step(single, 0, 0.1), std::invalid_argument);
}

TEST(AwayStepTest, MatchesDenseUpdateFormula) {
  Rng rng(35);
  for (int rep = 0; rep < 12; ++rep) {
    const auto it = test::random_iterate(7, 4, rng);
    const std::size_t idx = static_cast<std::size_t>(rng.uniform() * 4);
    const double a = it.components()[idx].weight;
    const double s = (a / (1.0 - a)) * rng.uniform();
    const auto next = apply_away_step(it, idx, s);
    DenseMatrix expected = it.materialize();
    for (double& x : expected.data()) x *= (1.0 + s);
    expected.add_outer(-s, it.components()[idx].direction);
    EXPECT_LE((next.materialize() - expected).frobenius_norm(), 1e-12);
    expect_valid(next);
  }
}

TEST(CompactTest, MergesDuplicateDirections) {
  SpectraIterate it(2, {{0.3, basis_vector(2, 0)}, {0.7, basis_vector(2, 0)}});
  const auto merged = compact(it, 1e-8);
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_DOUBLE_EQ(merged.components()[0].weight, 1.0);
}

TEST(CompactTest, LeavesOrthogonalAlone) {
  SpectraIterate it(2, {{0.5, basis_vector(2, 0)}, {0.5, basis_vector(2, 1)}});
  EXPECT_EQ(compact(it, 1e-6).size(), 2u);
}

TEST(CompactTest, NearDuplicateMergeIsSmallPerturbation) {
  const double angle = 1e-8;
  Vec tilted = {std::cos(angle), std::sin(angle)};
  SpectraIterate it(2, {{0.5, basis_vector(2, 0)}, {0.5, std::move(tilted)}});
  const double cos_tol = 1e-6;
  const auto merged = compact(it, cos_tol);
  ASSERT_EQ(merged.size(), 1u);
  const double change = (merged.materialize() - it.materialize()).frobenius_norm();
  EXPECT_LE(change, 4.0 * cos_tol);
  EXPECT_THROW(compact(it, 1e-3), std::invalid_argument);
}

TEST(IterateInvariantTest, WeightFloorUnderScheduleSteps) {
  // min weight stays at or above eta_t/2 under the default schedule,
  // regardless of which component the randomized step picks
  const StepSchedule schedule;
  Rng rng(77);
  for (int seed_rep = 0; seed_rep < 3; ++seed_rep) {
    auto it = SpectraIterate::rank_one(rng.unit_vector(12));
    for (int t = 1; t <= 200; ++t) {
      const double eta = schedule.eta_at(t);
      EXPECT_GE(it.min_weight(), eta / 2.0) << "iteration " << t;
      const std::size_t idx = sample_component(it, rng);
      const double step = eta_tilde(it.components()[idx].weight, eta);
      it = apply_rank_one_step(it, idx, rng.unit_vector(12), step);
    }
    expect_valid(it);
  }
}

TEST(IterateInvariantTest, DecompositionGrowsByAtMostOne) {
  Rng rng(78);
  auto it = SpectraIterate::rank_one(rng.unit_vector(6));
  const StepSchedule schedule;
  for (int t = 1; t <= 60; ++t) {
    const std::size_t before = it.size();
    if (t % 2 == 0) {
      it = cg_global_step(it, rng.unit_vector(6), 0.3);
    } else {
      const std::size_t idx = sample_component(it, rng);
      it = apply_rank_one_step(it, idx, rng.unit_vector(6),
                               eta_tilde(it.components()[idx].weight, schedule.eta_at(t)));
    }
    EXPECT_LE(it.size(), before + 1);
  }
}

TEST(IterateInvariantTest, RenormalizeRestoresExactSum) {
  Rng rng(79);
  auto it = test::random_iterate(5, 4, rng);
  it.renormalize();
  EXPECT_NEAR(it.weight_sum(), 1.0, 1e-15);
  const double direct = it.materialize().frobenius_norm();
  EXPECT_NEAR(it.frobenius_norm_sq(), direct * direct, 1e-13);
}

}  // namespace
}  // namespace scg
