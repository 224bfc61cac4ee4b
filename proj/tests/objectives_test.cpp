#include <gtest/gtest.h>

#include <cmath>

#include "scg/objectives.hpp"
#include "scg/oracle.hpp"
#include "test_support.hpp"

namespace scg {
namespace {

QuadraticObjective small_quadratic(int dim, int rank, Rng& rng) {
  std::vector<Vec> basis;
  while (static_cast<int>(basis.size()) < rank) {
    Vec q = rng.unit_vector(dim);
    for (const Vec& prev : basis) axpy(-dot(prev, q), prev, q);
    if (norm(q) < 1e-6) continue;
    basis.push_back(normalized(std::move(q)));
  }
  std::vector<RankOneTerm> target;
  double sum = 0.0;
  Vec coeffs(static_cast<std::size_t>(rank));
  for (double& c : coeffs) {
    c = 0.3 + rng.uniform();
    sum += c;
  }
  for (int r = 0; r < rank; ++r) target.push_back({coeffs[static_cast<std::size_t>(r)] / sum, basis[static_cast<std::size_t>(r)]});
  return QuadraticObjective(dim, std::move(target));
}

MatCompDataset small_dataset() {
  return MatCompDataset(4, 3, {{0, 0, 1.5}, {1, 2, -0.5}, {2, 1, 0.25}, {3, 0, 2.0}, {0, 2, 1.0}, {2, 2, -1.0}},
                        2.0);
}

TEST(ObjectiveParamsTest, Validation) {
  ObjectiveParams p;
  p.alpha = 2.0;
  p.beta = 1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.alpha = 0.5;
  p.rank_hint = 4;
  p.lambda_min_hint = 0.5;  // exceeds 1/rank
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.lambda_min_hint = 0.25;
  EXPECT_NO_THROW(p.validate());
}

TEST(QuadraticObjectiveTest, ZeroAtTarget) {
  QuadraticObjective obj(3, {{1.0, basis_vector(3, 0)}});
  const auto x = SpectraIterate::rank_one(basis_vector(3, 0));
  EXPECT_NEAR(obj.value(x), 0.0, 1e-15);
  EXPECT_LE(obj.gradient(x).materialize().frobenius_norm(), 1e-12);
}

TEST(QuadraticObjectiveTest, OrthogonalComponentsExample) {
  QuadraticObjective obj(2, {{1.0, basis_vector(2, 0)}});
  const auto x = SpectraIterate::rank_one(basis_vector(2, 1));
  EXPECT_NEAR(obj.value(x), 1.0, 1e-15);  // 1/2 ||diag(-1, 1)||² = 1
}

TEST(QuadraticObjectiveTest, HintsFilledForOrthonormalTarget) {
  Rng rng(2);
  const auto obj = small_quadratic(6, 3, rng);
  ASSERT_TRUE(obj.params().rank_hint.has_value());
  EXPECT_EQ(*obj.params().rank_hint, 3);
  ASSERT_TRUE(obj.params().lambda_min_hint.has_value());
  EXPECT_DOUBLE_EQ(obj.params().alpha, 1.0);
  EXPECT_DOUBLE_EQ(obj.params().beta, 1.0);
}

TEST(QuadraticObjectiveTest, DecompositionPathMatchesDensePath) {
  Rng rng(3);
  const auto obj = small_quadratic(8, 3, rng);
  for (int rep = 0; rep < 10; ++rep) {
    const auto x = test::random_iterate(8, 1 + rep % 5, rng);
    EXPECT_NEAR(obj.value(x), obj.value_at_dense(x.materialize()), 1e-12);
    const DenseMatrix fast = obj.gradient(x).materialize();
    const DenseMatrix slow = obj.gradient_at_dense(x.materialize());
    EXPECT_LE((fast - slow).frobenius_norm(), 1e-12);
    EXPECT_NEAR(obj.iterate_gradient_inner(x, obj.gradient(x)), test::inner(x.materialize(), slow),
                1e-12);
  }
}

TEST(MatCompValueTest, SingleObservationExamples) {
  MatCompDataset ds(1, 1, {{0, 0, 1.0}}, 1.0);
  const Vec zero{0.0};
  EXPECT_DOUBLE_EQ(matcomp_value(ds, zero), 0.5);
  const Vec fit{1.0};
  EXPECT_DOUBLE_EQ(matcomp_value(ds, fit), 0.0);
}

TEST(MatCompValueTest, MatchesDenseEvaluation) {
  Rng rng(4);
  const auto ds = small_dataset();
  DenseMatrix z(4, 3);
  for (double& v : z.data()) v = rng.normal();
  Vec at_obs;
  double expected = 0.0;
  for (const Observation& o : ds.observations()) {
    at_obs.push_back(z(o.row, o.col));
    expected += 0.5 * std::pow(z(o.row, o.col) - o.rating, 2);
  }
  EXPECT_NEAR(matcomp_value(ds, at_obs), expected, 1e-14);
}

TEST(MatCompDatasetTest, RejectsDuplicatesAndBadIndices) {
  EXPECT_THROW(MatCompDataset(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}}, 1.0), std::invalid_argument);
  EXPECT_THROW(MatCompDataset(2, 2, {{2, 0, 1.0}}, 1.0), std::invalid_argument);
  EXPECT_THROW(MatCompDataset(2, 2, {}, 0.0), std::invalid_argument);
}

TEST(LiftedObjectiveTest, ZeroOffDiagonalBlock) {
  const auto ds = small_dataset();
  MatCompObjective obj(ds);
  // block-diagonal iterate: directions supported on the row block only
  const auto x = SpectraIterate::rank_one(basis_vector(7, 0));
  double expected = 0.0;
  for (const Observation& o : ds.observations()) expected += 0.5 * o.rating * o.rating;
  EXPECT_NEAR(obj.value(x), expected, 1e-14);
}

TEST(LiftedObjectiveTest, ExactFitExample) {
  MatCompObjective obj(MatCompDataset(1, 1, {{0, 0, 1.0}}, 1.0));
  const double inv = 1.0 / std::sqrt(2.0);
  const auto x = SpectraIterate::rank_one({inv, inv});  // X = 1/2 [[1,1],[1,1]]
  EXPECT_NEAR(obj.value(x), 0.0, 1e-14);
  EXPECT_LE(obj.gradient(x).materialize().frobenius_norm(), 1e-12);
}

TEST(LiftedObjectiveTest, ValueMatchesExtractedZ) {
  Rng rng(5);
  const auto ds = small_dataset();
  MatCompObjective obj(ds);
  for (int rep = 0; rep < 8; ++rep) {
    const auto x = test::random_iterate(7, 3, rng);
    const DenseMatrix z = extract_Z(x, 4, 3, ds.theta());
    Vec at_obs;
    for (const Observation& o : ds.observations()) at_obs.push_back(z(o.row, o.col));
    EXPECT_NEAR(obj.value(x), matcomp_value(ds, at_obs), 1e-12);
  }
}

TEST(LiftedObjectiveTest, GradientTripletCount) {
  Rng rng(6);
  const auto ds = small_dataset();
  MatCompObjective obj(ds);
  const auto x = test::random_iterate(7, 4, rng);
  const SymmetricOperator g = obj.gradient(x);
  const std::size_t n = ds.observations().size();
  EXPECT_EQ(g.sparse_part().size(), n);
  EXPECT_EQ(g.symmetric_nnz(), 2 * n);  // mirrored block below the diagonal
  for (const Triplet& t : g.sparse_part()) EXPECT_LT(t.row, t.col);
}

TEST(LiftedObjectiveTest, ValueInvariantUnderRedecomposition) {
  Rng rng(7);
  const auto ds = small_dataset();
  MatCompObjective obj(ds);
  const auto x = test::random_iterate(7, 5, rng);
  const auto re = iterate_from_dense(x.materialize());
  EXPECT_NEAR(obj.value(x), obj.value(re), 1e-12);
}

TEST(ExtractZTest, PaperScalingExample) {
  // X2 = [[0.25]] with theta = 1 gives Z = [[0.5]]
  const double c = std::cos(0.2617993877991494);  // 15 degrees
  const double s = std::sin(0.2617993877991494);
  const auto x = SpectraIterate::rank_one({c, s});
  ASSERT_NEAR(c * s, 0.25, 1e-15);
  const DenseMatrix z = extract_Z(x, 1, 1, 1.0);
  EXPECT_NEAR(z(0, 0), 0.5, 1e-14);
}

TEST(ExtractZTest, BlockDiagonalGivesZero) {
  SpectraIterate x(2, {{0.5, basis_vector(2, 0)}, {0.5, basis_vector(2, 1)}});
  EXPECT_DOUBLE_EQ(extract_Z(x, 1, 1, 3.0)(0, 0), 0.0);
}

TEST(ExtractZTest, NuclearNormStaysInsideBall) {
  Rng rng(8);
  const double theta = 3.0;
  for (int rep = 0; rep < 10; ++rep) {
    const auto x = test::random_iterate(9, 4, rng);
    const Vec sv = singular_values(extract_Z(x, 5, 4, theta));
    double nuclear = 0.0;
    for (double v : sv) nuclear += v;
    EXPECT_LE(nuclear, theta + 1e-9);
  }
}

TEST(StrongConvexityBoundTest, ClosedForm) {
  EXPECT_DOUBLE_EQ(strong_convexity_gap_bound(0.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(strong_convexity_gap_bound(1.0, 2.0), 1.0);  // gap = alpha/2
  EXPECT_THROW(strong_convexity_gap_bound(1.0, 0.0), std::domain_error);
}

TEST(StrongConvexityBoundTest, DominatesTrueDistance) {
  Rng rng(9);
  const auto obj = small_quadratic(6, 2, rng);
  const DenseMatrix target = obj.target_dense();
  for (int rep = 0; rep < 8; ++rep) {
    const auto x = test::random_iterate(6, 3, rng);
    const double gap = obj.value(x);  // f(X*) = 0
    const double dist = (x.materialize() - target).frobenius_norm();
    EXPECT_GE(strong_convexity_gap_bound(gap, 1.0) + 1e-12, dist);
  }
}

class GradientCheck : public ::testing::Test {
 protected:
  static void run(const Objective& obj, const DenseMatrix& x, int directions, Rng& rng) {
    const DenseMatrix g = obj.gradient_at_dense(x);
    for (int rep = 0; rep < directions; ++rep) {
      const DenseMatrix d = test::random_symmetric_unit_direction(x.rows(), rng);
      const double fd = test::directional_derivative(obj, x, d);
      const double exact = test::inner(g, d);
      EXPECT_LE(std::abs(fd - exact), 1e-5 * std::max(1.0, std::abs(exact)));
    }
  }
};

TEST_F(GradientCheck, QuadraticMatchesFiniteDifferences) {
  Rng rng(10);
  const auto obj = small_quadratic(7, 3, rng);
  const auto x = test::random_iterate(7, 4, rng);
  run(obj, x.materialize(), 20, rng);
  // operator-path gradient agrees with the dense one used above
  EXPECT_LE((obj.gradient(x).materialize() - obj.gradient_at_dense(x.materialize())).frobenius_norm(),
            1e-12);
}

TEST_F(GradientCheck, LiftedMatchesFiniteDifferences) {
  Rng rng(11);
  MatCompObjective obj(small_dataset());
  const auto x = test::random_iterate(7, 4, rng);
  run(obj, x.materialize(), 20, rng);
  EXPECT_LE((obj.gradient(x).materialize() - obj.gradient_at_dense(x.materialize())).frobenius_norm(),
            1e-12);
}

TEST(ConvexityCertificateTest, HoldsOnRandomPairs) {
  Rng rng(12);
  const auto quad = small_quadratic(6, 2, rng);
  MatCompObjective lifted(small_dataset());
  for (int rep = 0; rep < 10; ++rep) {
    const double lambda = rng.uniform();
    {
      const DenseMatrix a = test::random_iterate(6, 3, rng).materialize();
      const DenseMatrix b = test::random_iterate(6, 3, rng).materialize();
      DenseMatrix mix = a;
      for (std::size_t i = 0; i < mix.data().size(); ++i)
        mix.data()[i] = lambda * a.data()[i] + (1.0 - lambda) * b.data()[i];
      EXPECT_LE(quad.value_at_dense(mix),
                lambda * quad.value_at_dense(a) + (1.0 - lambda) * quad.value_at_dense(b) + 1e-10);
    }
    {
      const DenseMatrix a = test::random_iterate(7, 3, rng).materialize();
      const DenseMatrix b = test::random_iterate(7, 3, rng).materialize();
      DenseMatrix mix = a;
      for (std::size_t i = 0; i < mix.data().size(); ++i)
        mix.data()[i] = lambda * a.data()[i] + (1.0 - lambda) * b.data()[i];
      EXPECT_LE(lifted.value_at_dense(mix), lambda * lifted.value_at_dense(a) +
                                                (1.0 - lambda) * lifted.value_at_dense(b) + 1e-10);
    }
  }
}

TEST(SmoothnessCertificateTest, HoldsOnRandomPairs) {
  Rng rng(13);
  const auto quad = small_quadratic(6, 2, rng);
  for (int rep = 0; rep < 10; ++rep) {
    const DenseMatrix x = test::random_iterate(6, 3, rng).materialize();
    const DenseMatrix y = test::random_iterate(6, 3, rng).materialize();
    const DenseMatrix g = quad.gradient_at_dense(x);
    const double dist = (y - x).frobenius_norm();
    EXPECT_LE(quad.value_at_dense(y), quad.value_at_dense(x) + test::inner(y - x, g) +
                                          0.5 * quad.params().beta * dist * dist + 1e-10);
  }
}

}  // namespace
}  // namespace scg
