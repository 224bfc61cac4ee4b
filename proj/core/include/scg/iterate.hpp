#pragma once

#include <cstddef>
#include <vector>

#include "scg/dense.hpp"
#include "scg/operator.hpp"
#include "scg/rng.hpp"
#include "scg/vec.hpp"

namespace scg {

// weights at or below this are treated as emptied and dropped
inline constexpr double kWeightDropThreshold = 1e-12;

struct Component {
  double weight = 0.0;  // in (0, 1]
  Vec direction;        // unit
};

// A point of the spectrahedron held as an explicit convex combination of
// rank-one matrices, X = sum_i a_i x_i x_iᵀ. Value-semantic: update operations
// return new iterates. The squared Frobenius norm of the materialized matrix
// is cached and maintained incrementally by the update operations.
class SpectraIterate {
 public:
  SpectraIterate(int dim, std::vector<Component> components);
  static SpectraIterate rank_one(Vec direction);

  int dim() const { return dim_; }
  const std::vector<Component>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  double weight_sum() const;
  double min_weight() const;
  double frobenius_norm_sq() const { return frob_sq_; }

  // vᵀ X v = sum_i a_i (x_iᵀ v)²
  double quadratic_form(const Vec& v) const;

  DenseMatrix materialize() const;

  // divide weights by their exact sum and refresh the cached norm; absorbs
  // floating-point drift on very long runs
  void renormalize();

 private:
  struct Unchecked {};
  SpectraIterate(int dim, std::vector<Component> components, double frob_sq, Unchecked);
  double compute_frob_sq() const;

  int dim_ = 0;
  std::vector<Component> components_;
  double frob_sq_ = 0.0;

  friend SpectraIterate apply_rank_one_step(const SpectraIterate&, std::size_t, Vec, double);
  friend SpectraIterate cg_global_step(const SpectraIterate&, Vec, double);
  friend SpectraIterate apply_away_step(const SpectraIterate&, std::size_t, double);
  friend SpectraIterate compact(const SpectraIterate&, double);
};

// index distributed as the weight vector
std::size_t sample_component(const SpectraIterate& it, Rng& rng);

// argmax_i x_iᵀ (grad) x_i, ties broken by lowest index
std::size_t greedy_component(const SpectraIterate& it, const SymmetricOperator& grad);

// effective step: eta/2 when the sampled weight is at least eta, otherwise the
// whole weight; never exceeds the weight, which is what keeps iterates feasible
double eta_tilde(double weight, double eta);

// X + step * (v vᵀ - x_index x_indexᵀ); requires step <= weight(index)
SpectraIterate apply_rank_one_step(const SpectraIterate& it, std::size_t index, Vec direction,
                                   double step);

// X + step * (v vᵀ - X), step in [0, 1]
SpectraIterate cg_global_step(const SpectraIterate& it, Vec direction, double step);

// X + step * (X - x_index x_indexᵀ); requires step <= a/(1-a) and >= 2 components
SpectraIterate apply_away_step(const SpectraIterate& it, std::size_t index, double step);

// merge near-duplicate directions (|x_iᵀx_j| >= 1 - cos_tol); cos_tol in [0, 1e-6]
SpectraIterate compact(const SpectraIterate& it, double cos_tol);

}  // namespace scg
