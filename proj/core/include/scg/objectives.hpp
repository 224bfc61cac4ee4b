#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "scg/dense.hpp"
#include "scg/iterate.hpp"
#include "scg/operator.hpp"

namespace scg {

// Curvature constants and optional structure hints about the optimum.
struct ObjectiveParams {
  double alpha = 0.0;  // strong-convexity modulus; 0 = unknown/absent
  double beta = 1.0;   // smoothness modulus
  std::optional<int> rank_hint;            // rank(X*)
  std::optional<double> lambda_min_hint;   // smallest nonzero eigenvalue of X*, in (0, 1]

  void validate() const;
};

// Value/gradient oracle over the spectrahedron. Implementations are immutable
// after construction; all calls are const and safe concurrently. The dense
// facet exists for the projected-gradient test oracle (small d only).
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int dim() const = 0;
  virtual const ObjectiveParams& params() const = 0;

  virtual double value(const SpectraIterate& x) const = 0;
  virtual SymmetricOperator gradient(const SpectraIterate& x) const = 0;
  virtual std::pair<double, SymmetricOperator> value_grad(const SpectraIterate& x) const {
    return {value(x), gradient(x)};
  }

  // X • grad(X); the generic path costs one operator apply per component
  virtual double iterate_gradient_inner(const SpectraIterate& x,
                                        const SymmetricOperator& grad_at_x) const;

  virtual double value_at_dense(const DenseMatrix& x) const = 0;
  virtual DenseMatrix gradient_at_dense(const DenseMatrix& x) const = 0;
};

// f(X) = 1/2 ||X - M||_F², the canonical alpha = beta = 1 test objective.
// M is given in low-rank form sum_m c_m u_m u_mᵀ with c_m > 0 summing to 1;
// values and gradients are computed from the decompositions, never through a
// d x d materialization. When the target directions are pairwise orthogonal
// the rank/lambda_min hints are filled in automatically.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(int dim, std::vector<RankOneTerm> target);

  int dim() const override { return dim_; }
  const ObjectiveParams& params() const override { return params_; }

  double value(const SpectraIterate& x) const override;
  SymmetricOperator gradient(const SpectraIterate& x) const override;
  double iterate_gradient_inner(const SpectraIterate& x,
                                const SymmetricOperator& grad_at_x) const override;

  double value_at_dense(const DenseMatrix& x) const override;
  DenseMatrix gradient_at_dense(const DenseMatrix& x) const override;

  const std::vector<RankOneTerm>& target_terms() const { return target_; }
  DenseMatrix target_dense() const;

 private:
  double iterate_target_inner(const SpectraIterate& x) const;  // X • M

  int dim_;
  std::vector<RankOneTerm> target_;
  double target_frob_sq_;
  ObjectiveParams params_;
};

struct Observation {
  int row = 0;
  int col = 0;
  double rating = 0.0;
};

// Partially observed d1 x d2 ratings with a nuclear-norm radius theta.
class MatCompDataset {
 public:
  MatCompDataset(int d1, int d2, std::vector<Observation> observations, double theta);

  int d1() const { return d1_; }
  int d2() const { return d2_; }
  double theta() const { return theta_; }
  const std::vector<Observation>& observations() const { return observations_; }

 private:
  int d1_;
  int d2_;
  std::vector<Observation> observations_;
  double theta_;
};

// 1/2 sum_l (Z[i_l, j_l] - r_l)², with Z given by its values at the observed
// coordinates, aligned with ds.observations().
double matcomp_value(const MatCompDataset& ds, std::span<const double> z_at_observations);

// Z = 2 theta * X_2 where X_2 is the top-right d1 x d2 block of X
DenseMatrix extract_Z(const SpectraIterate& x, int d1, int d2, double theta);

// sqrt(2 * value_gap / alpha): upper bound on ||X - X*||_F under
// alpha-strong convexity
double strong_convexity_gap_bound(double value_gap, double alpha);

// Matrix completion lifted to the spectrahedron over dimension d1 + d2:
// f_hat(X) = f(2 theta X_2). The gradient is the symmetric sparse operator
// whose top-right block is theta * G (and bottom-left its mirror) with
// G[i_l, j_l] = Z[i_l, j_l] - r_l at observed entries; unobserved entries are
// never materialized, so an evaluation costs O(k * n).
class MatCompObjective final : public Objective {
 public:
  explicit MatCompObjective(MatCompDataset dataset, double beta = 1.0);

  int dim() const override { return dataset_.d1() + dataset_.d2(); }
  const ObjectiveParams& params() const override { return params_; }
  const MatCompDataset& dataset() const { return dataset_; }

  // Z values at the observed coordinates, aligned with observations()
  Vec observed_entries(const SpectraIterate& x) const;

  double value(const SpectraIterate& x) const override;
  SymmetricOperator gradient(const SpectraIterate& x) const override;
  std::pair<double, SymmetricOperator> value_grad(const SpectraIterate& x) const override;
  double iterate_gradient_inner(const SpectraIterate& x,
                                const SymmetricOperator& grad_at_x) const override;

  double value_at_dense(const DenseMatrix& x) const override;
  DenseMatrix gradient_at_dense(const DenseMatrix& x) const override;

 private:
  SymmetricOperator gradient_from_entries(const Vec& z) const;

  MatCompDataset dataset_;
  ObjectiveParams params_;
};

}  // namespace scg
