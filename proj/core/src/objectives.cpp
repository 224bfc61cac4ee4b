#include "scg/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace scg {

void ObjectiveParams::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be nonnegative");
  if (alpha > 0.0 && alpha > beta * (1.0 + 1e-12))
    throw std::invalid_argument("alpha must not exceed beta");
  if (rank_hint && *rank_hint < 1) throw std::invalid_argument("rank hint must be >= 1");
  if (lambda_min_hint && !(*lambda_min_hint > 0.0 && *lambda_min_hint <= 1.0))
    throw std::invalid_argument("lambda_min hint must lie in (0, 1]");
  if (rank_hint && lambda_min_hint && *lambda_min_hint > 1.0 / *rank_hint + 1e-12)
    throw std::invalid_argument("lambda_min hint exceeds 1/rank: inconsistent with trace 1");
}

double Objective::iterate_gradient_inner(const SpectraIterate& x,
                                         const SymmetricOperator& grad_at_x) const {
  double s = 0.0;
  for (const Component& c : x.components()) s += c.weight * grad_at_x.quadratic_form(c.direction);
  return s;
}

QuadraticObjective::QuadraticObjective(int dim, std::vector<RankOneTerm> target)
    : dim_(dim), target_(std::move(target)) {
  if (dim_ <= 0) throw std::invalid_argument("quadratic objective: dimension must be positive");
  double trace = 0.0;
  for (const RankOneTerm& t : target_) {
    if (static_cast<int>(t.direction.size()) != dim_)
      throw std::invalid_argument("quadratic objective: target direction length mismatch");
    if (!is_unit(t.direction))
      throw std::invalid_argument("quadratic objective: target directions must be unit");
    if (!(t.coeff > 0.0))
      throw std::invalid_argument("quadratic objective: target coefficients must be positive");
    trace += t.coeff;
  }
  if (std::abs(trace - 1.0) > 1e-9)
    throw std::invalid_argument("quadratic objective: target must have unit trace");

  target_frob_sq_ = 0.0;
  bool orthogonal = true;
  for (std::size_t i = 0; i < target_.size(); ++i) {
    target_frob_sq_ += target_[i].coeff * target_[i].coeff;
    for (std::size_t j = i + 1; j < target_.size(); ++j) {
      const double d = dot(target_[i].direction, target_[j].direction);
      target_frob_sq_ += 2.0 * target_[i].coeff * target_[j].coeff * d * d;
      if (std::abs(d) > 1e-10) orthogonal = false;
    }
  }

  params_.alpha = 1.0;
  params_.beta = 1.0;
  if (orthogonal && !target_.empty()) {
    params_.rank_hint = static_cast<int>(target_.size());
    double lmin = target_.front().coeff;
    for (const RankOneTerm& t : target_) lmin = std::min(lmin, t.coeff);
    params_.lambda_min_hint = lmin;
  }
  params_.validate();
}

double QuadraticObjective::iterate_target_inner(const SpectraIterate& x) const {
  double s = 0.0;
  for (const Component& c : x.components())
    for (const RankOneTerm& t : target_) {
      const double d = dot(c.direction, t.direction);
      s += c.weight * t.coeff * d * d;
    }
  return s;
}

double QuadraticObjective::value(const SpectraIterate& x) const {
  if (x.dim() != dim_) throw std::invalid_argument("quadratic objective: dimension mismatch");
  return 0.5 * (x.frobenius_norm_sq() - 2.0 * iterate_target_inner(x) + target_frob_sq_);
}

SymmetricOperator QuadraticObjective::gradient(const SpectraIterate& x) const {
  if (x.dim() != dim_) throw std::invalid_argument("quadratic objective: dimension mismatch");
  std::vector<RankOneTerm> terms;
  terms.reserve(x.size() + target_.size());
  for (const Component& c : x.components()) terms.push_back({c.weight, c.direction});
  for (const RankOneTerm& t : target_) terms.push_back({-t.coeff, t.direction});
  return SymmetricOperator(dim_, {}, std::move(terms));
}

double QuadraticObjective::iterate_gradient_inner(const SpectraIterate& x,
                                                  const SymmetricOperator&) const {
  return x.frobenius_norm_sq() - iterate_target_inner(x);
}

double QuadraticObjective::value_at_dense(const DenseMatrix& x) const {
  DenseMatrix diff = x - target_dense();
  const double f = diff.frobenius_norm();
  return 0.5 * f * f;
}

DenseMatrix QuadraticObjective::gradient_at_dense(const DenseMatrix& x) const {
  return x - target_dense();
}

DenseMatrix QuadraticObjective::target_dense() const {
  DenseMatrix m(dim_, dim_);
  for (const RankOneTerm& t : target_) m.add_outer(t.coeff, t.direction);
  return m;
}

MatCompDataset::MatCompDataset(int d1, int d2, std::vector<Observation> observations, double theta)
    : d1_(d1), d2_(d2), observations_(std::move(observations)), theta_(theta) {
  if (d1_ <= 0 || d2_ <= 0) throw std::invalid_argument("dataset dimensions must be positive");
  if (!(theta_ > 0.0)) throw std::invalid_argument("theta must be positive");
  std::unordered_set<long long> seen;
  seen.reserve(observations_.size() * 2);
  for (const Observation& o : observations_) {
    if (o.row < 0 || o.row >= d1_ || o.col < 0 || o.col >= d2_)
      throw std::invalid_argument("observation index out of range");
    const long long key = static_cast<long long>(o.row) * d2_ + o.col;
    if (!seen.insert(key).second)
      throw std::invalid_argument("duplicate observation at (" + std::to_string(o.row) + ", " +
                                  std::to_string(o.col) + ")");
  }
}

double matcomp_value(const MatCompDataset& ds, std::span<const double> z_at_observations) {
  if (z_at_observations.size() != ds.observations().size())
    throw std::invalid_argument("matcomp_value: entry count does not match observations");
  double s = 0.0;
  for (std::size_t l = 0; l < z_at_observations.size(); ++l) {
    const double r = z_at_observations[l] - ds.observations()[l].rating;
    s += r * r;
  }
  return 0.5 * s;
}

DenseMatrix extract_Z(const SpectraIterate& x, int d1, int d2, double theta) {
  if (x.dim() != d1 + d2) throw std::invalid_argument("extract_Z: iterate dimension mismatch");
  DenseMatrix z(d1, d2);
  for (const Component& c : x.components()) {
    for (int i = 0; i < d1; ++i) {
      const double wi = 2.0 * theta * c.weight * c.direction[static_cast<std::size_t>(i)];
      if (wi == 0.0) continue;
      for (int j = 0; j < d2; ++j)
        z(i, j) += wi * c.direction[static_cast<std::size_t>(d1 + j)];
    }
  }
  return z;
}

double strong_convexity_gap_bound(double value_gap, double alpha) {
  if (!(alpha > 0.0))
    throw std::domain_error("strong_convexity_gap_bound requires alpha > 0");
  if (value_gap < 0.0) throw std::invalid_argument("value gap must be nonnegative");
  return std::sqrt(2.0 * value_gap / alpha);
}

MatCompObjective::MatCompObjective(MatCompDataset dataset, double beta)
    : dataset_(std::move(dataset)) {
  params_.alpha = 0.0;  // relies on restricted strong convexity, not modeled here
  params_.beta = beta;
  params_.validate();
}

Vec MatCompObjective::observed_entries(const SpectraIterate& x) const {
  if (x.dim() != dim()) throw std::invalid_argument("matcomp objective: dimension mismatch");
  const int d1 = dataset_.d1();
  const auto& obs = dataset_.observations();
  Vec z(obs.size(), 0.0);
  for (const Component& c : x.components()) {
    const double w2t = 2.0 * dataset_.theta() * c.weight;
    for (std::size_t l = 0; l < obs.size(); ++l)
      z[l] += w2t * c.direction[static_cast<std::size_t>(obs[l].row)] *
              c.direction[static_cast<std::size_t>(d1 + obs[l].col)];
  }
  return z;
}

double MatCompObjective::value(const SpectraIterate& x) const {
  return matcomp_value(dataset_, observed_entries(x));
}

SymmetricOperator MatCompObjective::gradient_from_entries(const Vec& z) const {
  const int d1 = dataset_.d1();
  const auto& obs = dataset_.observations();
  std::vector<Triplet> triplets;
  triplets.reserve(obs.size());
  for (std::size_t l = 0; l < obs.size(); ++l)
    triplets.push_back({obs[l].row, d1 + obs[l].col,
                        dataset_.theta() * (z[l] - obs[l].rating)});
  return SymmetricOperator(dim(), std::move(triplets), {});
}

SymmetricOperator MatCompObjective::gradient(const SpectraIterate& x) const {
  return gradient_from_entries(observed_entries(x));
}

std::pair<double, SymmetricOperator> MatCompObjective::value_grad(const SpectraIterate& x) const {
  const Vec z = observed_entries(x);
  return {matcomp_value(dataset_, z), gradient_from_entries(z)};
}

double MatCompObjective::iterate_gradient_inner(const SpectraIterate& x,
                                                const SymmetricOperator&) const {
  // X • grad = sum_l (Z_l - r_l) Z_l, since X[i, d1+j] = Z_ij / (2 theta)
  const Vec z = observed_entries(x);
  double s = 0.0;
  for (std::size_t l = 0; l < z.size(); ++l)
    s += (z[l] - dataset_.observations()[l].rating) * z[l];
  return s;
}

double MatCompObjective::value_at_dense(const DenseMatrix& x) const {
  const int d1 = dataset_.d1();
  const auto& obs = dataset_.observations();
  Vec z(obs.size());
  for (std::size_t l = 0; l < obs.size(); ++l)
    z[l] = 2.0 * dataset_.theta() * x(obs[l].row, d1 + obs[l].col);
  return matcomp_value(dataset_, z);
}

DenseMatrix MatCompObjective::gradient_at_dense(const DenseMatrix& x) const {
  const int d1 = dataset_.d1();
  DenseMatrix g(dim(), dim());
  for (const Observation& o : dataset_.observations()) {
    const double z = 2.0 * dataset_.theta() * x(o.row, d1 + o.col);
    const double value = dataset_.theta() * (z - o.rating);
    g(o.row, d1 + o.col) = value;
    g(d1 + o.col, o.row) = value;
  }
  return g;
}

}  // namespace scg
