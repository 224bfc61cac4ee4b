#include "scg/operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scg {

namespace {

void check_rank_one_term(const RankOneTerm& term, int dim) {
  if (static_cast<int>(term.direction.size()) != dim)
    throw std::invalid_argument("rank-one direction has wrong length");
  if (!is_unit(term.direction))
    throw std::invalid_argument("rank-one direction must be a unit vector");
}

}  // namespace

SymmetricOperator::SymmetricOperator(int dim, std::vector<Triplet> sparse_part,
                                     std::vector<RankOneTerm> rank_one_terms)
    : dim_(dim), sparse_part_(std::move(sparse_part)), rank_one_terms_(std::move(rank_one_terms)) {
  if (dim_ <= 0) throw std::invalid_argument("operator dimension must be positive");
  for (const Triplet& t : sparse_part_) {
    if (t.row < 0 || t.col < 0 || t.row >= dim_ || t.col >= dim_)
      throw std::invalid_argument("triplet index out of range");
    if (t.row > t.col) throw std::invalid_argument("triplets must satisfy row <= col");
  }
  // duplicates are rejected, not summed: they are almost always ingestion bugs
  std::vector<std::pair<int, int>> keys;
  keys.reserve(sparse_part_.size());
  for (const Triplet& t : sparse_part_) keys.emplace_back(t.row, t.col);
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
    throw std::invalid_argument("duplicate (row, col) pair in sparse part");
  for (const RankOneTerm& term : rank_one_terms_) check_rank_one_term(term, dim_);
}

SymmetricOperator SymmetricOperator::from_diagonal(const Vec& diag) {
  std::vector<Triplet> triplets;
  triplets.reserve(diag.size());
  for (int i = 0; i < static_cast<int>(diag.size()); ++i)
    if (diag[static_cast<std::size_t>(i)] != 0.0)
      triplets.push_back({i, i, diag[static_cast<std::size_t>(i)]});
  return SymmetricOperator(static_cast<int>(diag.size()), std::move(triplets), {});
}

std::size_t SymmetricOperator::symmetric_nnz() const {
  std::size_t nnz = 0;
  for (const Triplet& t : sparse_part_) nnz += (t.row == t.col) ? 1 : 2;
  return nnz;
}

void SymmetricOperator::apply_into(const Vec& v, Vec& out) const {
  if (static_cast<int>(v.size()) != dim_)
    throw std::invalid_argument("apply: vector length " + std::to_string(v.size()) +
                                " does not match operator dimension " + std::to_string(dim_));
  out.assign(static_cast<std::size_t>(dim_), 0.0);
  for (const Triplet& t : sparse_part_) {
    out[static_cast<std::size_t>(t.row)] += t.value * v[static_cast<std::size_t>(t.col)];
    if (t.row != t.col)
      out[static_cast<std::size_t>(t.col)] += t.value * v[static_cast<std::size_t>(t.row)];
  }
  for (const RankOneTerm& term : rank_one_terms_) {
    const double cu = term.coeff * dot(term.direction, v);
    if (cu != 0.0) axpy(cu, term.direction, out);
  }
}

Vec SymmetricOperator::apply(const Vec& v) const {
  Vec out;
  apply_into(v, out);
  return out;
}

double SymmetricOperator::quadratic_form(const Vec& v) const {
  Vec av;
  apply_into(v, av);
  return dot(v, av);
}

double SymmetricOperator::spectral_bound() const {
  Vec row_sum(static_cast<std::size_t>(dim_), 0.0);
  for (const Triplet& t : sparse_part_) {
    row_sum[static_cast<std::size_t>(t.row)] += std::abs(t.value);
    if (t.row != t.col) row_sum[static_cast<std::size_t>(t.col)] += std::abs(t.value);
  }
  double bound = 0.0;
  for (double s : row_sum) bound = std::max(bound, s);
  for (const RankOneTerm& term : rank_one_terms_) bound += std::abs(term.coeff);
  return bound;
}

SymmetricOperator SymmetricOperator::scaled(double s) const {
  std::vector<Triplet> triplets = sparse_part_;
  for (Triplet& t : triplets) t.value *= s;
  std::vector<RankOneTerm> terms = rank_one_terms_;
  for (RankOneTerm& term : terms) term.coeff *= s;
  return SymmetricOperator(dim_, std::move(triplets), std::move(terms));
}

SymmetricOperator SymmetricOperator::with_rank_one(double coeff, Vec direction) const {
  std::vector<RankOneTerm> terms = rank_one_terms_;
  terms.push_back({coeff, std::move(direction)});
  return SymmetricOperator(dim_, sparse_part_, std::move(terms));
}

DenseMatrix SymmetricOperator::materialize() const {
  DenseMatrix m(dim_, dim_);
  for (const Triplet& t : sparse_part_) {
    m(t.row, t.col) += t.value;
    if (t.row != t.col) m(t.col, t.row) += t.value;
  }
  for (const RankOneTerm& term : rank_one_terms_) m.add_outer(term.coeff, term.direction);
  return m;
}

SymmetricOperator regularized_negation(const SymmetricOperator& a, double coeff, const Vec& x) {
  std::vector<Triplet> triplets = a.sparse_part();
  for (Triplet& t : triplets) t.value = -t.value;
  std::vector<RankOneTerm> terms;
  terms.reserve(a.rank_one_terms().size() + 1);
  for (const RankOneTerm& term : a.rank_one_terms()) terms.push_back({-term.coeff, term.direction});
  terms.push_back({coeff, x});
  return SymmetricOperator(a.dim(), std::move(triplets), std::move(terms));
}

}  // namespace scg
