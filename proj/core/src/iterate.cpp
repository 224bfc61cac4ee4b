#include "scg/iterate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scg {

namespace {

std::vector<Component> drop_emptied(std::vector<Component> comps) {
  comps.erase(std::remove_if(comps.begin(), comps.end(),
                             [](const Component& c) { return c.weight <= kWeightDropThreshold; }),
              comps.end());
  return comps;
}

}  // namespace

SpectraIterate::SpectraIterate(int dim, std::vector<Component> components)
    : dim_(dim), components_(std::move(components)) {
  if (dim_ <= 0) throw std::invalid_argument("iterate dimension must be positive");
  if (components_.empty()) throw std::invalid_argument("iterate needs at least one component");
  double sum = 0.0;
  for (const Component& c : components_) {
    if (static_cast<int>(c.direction.size()) != dim_)
      throw std::invalid_argument("component direction has wrong length");
    if (!(c.weight > 0.0)) throw std::invalid_argument("component weights must be positive");
    if (!is_unit(c.direction))
      throw std::invalid_argument("component directions must be unit vectors");
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("component weights must sum to 1 (got " + std::to_string(sum) + ")");
  frob_sq_ = compute_frob_sq();
}

SpectraIterate::SpectraIterate(int dim, std::vector<Component> components, double frob_sq, Unchecked)
    : dim_(dim), components_(std::move(components)), frob_sq_(frob_sq) {}

SpectraIterate SpectraIterate::rank_one(Vec direction) {
  if (!is_unit(direction)) throw std::invalid_argument("rank_one requires a unit vector");
  const int dim = static_cast<int>(direction.size());
  std::vector<Component> comps;
  comps.push_back({1.0, std::move(direction)});
  return SpectraIterate(dim, std::move(comps), 1.0, Unchecked{});
}

double SpectraIterate::weight_sum() const {
  double s = 0.0;
  for (const Component& c : components_) s += c.weight;
  return s;
}

double SpectraIterate::min_weight() const {
  double m = components_.front().weight;
  for (const Component& c : components_) m = std::min(m, c.weight);
  return m;
}

double SpectraIterate::quadratic_form(const Vec& v) const {
  double s = 0.0;
  for (const Component& c : components_) {
    const double d = dot(c.direction, v);
    s += c.weight * d * d;
  }
  return s;
}

double SpectraIterate::compute_frob_sq() const {
  // ||X||_F² = sum_ij a_i a_j (x_iᵀ x_j)²
  double s = 0.0;
  const std::size_t k = components_.size();
  for (std::size_t i = 0; i < k; ++i) {
    s += components_[i].weight * components_[i].weight;
    for (std::size_t j = i + 1; j < k; ++j) {
      const double d = dot(components_[i].direction, components_[j].direction);
      s += 2.0 * components_[i].weight * components_[j].weight * d * d;
    }
  }
  return s;
}

DenseMatrix SpectraIterate::materialize() const {
  DenseMatrix m(dim_, dim_);
  for (const Component& c : components_) m.add_outer(c.weight, c.direction);
  return m;
}

void SpectraIterate::renormalize() {
  const double s = weight_sum();
  for (Component& c : components_) c.weight /= s;
  frob_sq_ = compute_frob_sq();
}

std::size_t sample_component(const SpectraIterate& it, Rng& rng) {
  const double u = rng.uniform() * it.weight_sum();
  double acc = 0.0;
  const auto& comps = it.components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    acc += comps[i].weight;
    if (u < acc) return i;
  }
  return comps.size() - 1;
}

std::size_t greedy_component(const SpectraIterate& it, const SymmetricOperator& grad) {
  if (grad.dim() != it.dim())
    throw std::invalid_argument("greedy_component: gradient dimension mismatch");
  const auto& comps = it.components();
  std::size_t best = 0;
  double best_value = grad.quadratic_form(comps[0].direction);
  for (std::size_t i = 1; i < comps.size(); ++i) {
    const double value = grad.quadratic_form(comps[i].direction);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  return best;
}

double eta_tilde(double weight, double eta) {
  if (!(weight > 0.0) || weight > 1.0 + 1e-12)
    throw std::invalid_argument("eta_tilde: weight must lie in (0, 1]");
  if (eta < 0.0 || eta > 2.0)
    throw std::invalid_argument("eta_tilde: eta must lie in [0, 2]");
  return weight >= eta ? eta / 2.0 : weight;
}

SpectraIterate apply_rank_one_step(const SpectraIterate& it, std::size_t index, Vec direction,
                                   double step) {
  const auto& comps = it.components();
  if (index >= comps.size()) throw std::invalid_argument("apply_rank_one_step: index out of range");
  if (static_cast<int>(direction.size()) != it.dim())
    throw std::invalid_argument("apply_rank_one_step: direction has wrong length");
  if (!is_unit(direction))
    throw std::invalid_argument("apply_rank_one_step: direction must be a unit vector");
  const double a = comps[index].weight;
  if (step < 0.0 || step > a * (1.0 + 1e-12) + 1e-15)
    throw std::invalid_argument("apply_rank_one_step: step " + std::to_string(step) +
                                " exceeds component weight " + std::to_string(a));

  // ||X + s(vvᵀ - xxᵀ)||² = ||X||² + 2s(vᵀXv - xᵀXx) + s²(2 - 2(vᵀx)²)
  const double vxv = it.quadratic_form(direction);
  const double xxx = it.quadratic_form(comps[index].direction);
  const double cross = dot(direction, comps[index].direction);
  const double frob = it.frobenius_norm_sq() + 2.0 * step * (vxv - xxx) +
                      step * step * (2.0 - 2.0 * cross * cross);

  std::vector<Component> next = comps;
  next[index].weight = a - step;
  next.push_back({step, std::move(direction)});
  return SpectraIterate(it.dim(), drop_emptied(std::move(next)), frob, SpectraIterate::Unchecked{});
}

SpectraIterate cg_global_step(const SpectraIterate& it, Vec direction, double step) {
  if (static_cast<int>(direction.size()) != it.dim())
    throw std::invalid_argument("cg_global_step: direction has wrong length");
  if (!is_unit(direction)) throw std::invalid_argument("cg_global_step: direction must be unit");
  if (step < 0.0 || step > 1.0 + 1e-12)
    throw std::invalid_argument("cg_global_step: step must lie in [0, 1]");
  step = std::min(step, 1.0);

  const double vxv = it.quadratic_form(direction);
  const double frob = (1.0 - step) * (1.0 - step) * it.frobenius_norm_sq() +
                      2.0 * step * (1.0 - step) * vxv + step * step;

  std::vector<Component> next = it.components();
  for (Component& c : next) c.weight *= (1.0 - step);
  next.push_back({step, std::move(direction)});
  return SpectraIterate(it.dim(), drop_emptied(std::move(next)), frob, SpectraIterate::Unchecked{});
}

SpectraIterate apply_away_step(const SpectraIterate& it, std::size_t index, double step) {
  const auto& comps = it.components();
  if (index >= comps.size()) throw std::invalid_argument("apply_away_step: index out of range");
  if (comps.size() < 2) throw std::invalid_argument("apply_away_step: needs at least 2 components");
  const double a = comps[index].weight;
  const double cap = a / (1.0 - a);
  if (step < 0.0 || step > cap * (1.0 + 1e-12) + 1e-15)
    throw std::invalid_argument("apply_away_step: step " + std::to_string(step) +
                                " exceeds the feasible cap " + std::to_string(cap));
  step = std::min(step, cap);

  const double xxx = it.quadratic_form(comps[index].direction);
  const double frob = (1.0 + step) * (1.0 + step) * it.frobenius_norm_sq() -
                      2.0 * step * (1.0 + step) * xxx + step * step;

  std::vector<Component> next = comps;
  for (Component& c : next) c.weight *= (1.0 + step);
  next[index].weight -= step;
  return SpectraIterate(it.dim(), drop_emptied(std::move(next)), frob, SpectraIterate::Unchecked{});
}

SpectraIterate compact(const SpectraIterate& it, double cos_tol) {
  if (cos_tol < 0.0 || cos_tol > 1e-6)
    throw std::invalid_argument("compact: cos_tol must lie in [0, 1e-6]");
  std::vector<Component> merged;
  merged.reserve(it.size());
  for (const Component& c : it.components()) {
    bool absorbed = false;
    for (Component& m : merged) {
      if (std::abs(dot(m.direction, c.direction)) >= 1.0 - cos_tol) {
        if (c.weight > m.weight) m.direction = c.direction;
        m.weight += c.weight;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(c);
  }
  if (merged.size() == it.size()) return it;
  SpectraIterate out(it.dim(), std::move(merged), 0.0, SpectraIterate::Unchecked{});
  out.frob_sq_ = out.compute_frob_sq();
  return out;
}

}  // namespace scg
