#pragma once

#include <cstddef>
#include <vector>

#include "scg/dense.hpp"
#include "scg/vec.hpp"

namespace scg {

struct Triplet {
  int row = 0;
  int col = 0;          // row <= col; interpreted symmetrically
  double value = 0.0;
};

struct RankOneTerm {
  double coeff = 0.0;
  Vec direction;        // unit within 1e-10
};

// d x d symmetric linear map S + sum_j c_j u_j u_jᵀ, stored as upper triplets
// plus rank-one terms. Immutable after construction; apply costs
// O(nnz(S) + d * #terms).
class SymmetricOperator {
 public:
  SymmetricOperator(int dim, std::vector<Triplet> sparse_part,
                    std::vector<RankOneTerm> rank_one_terms);

  static SymmetricOperator zero(int dim) { return SymmetricOperator(dim, {}, {}); }
  static SymmetricOperator from_diagonal(const Vec& diag);

  int dim() const { return dim_; }
  const std::vector<Triplet>& sparse_part() const { return sparse_part_; }
  const std::vector<RankOneTerm>& rank_one_terms() const { return rank_one_terms_; }

  // number of nonzeros of the dense equivalent of the sparse part
  std::size_t symmetric_nnz() const;

  Vec apply(const Vec& v) const;
  void apply_into(const Vec& v, Vec& out) const;
  double quadratic_form(const Vec& v) const;  // vᵀ A v

  // upper bound on max |lambda|: Gershgorin row sums of the sparse part plus
  // sum of |c_j|
  double spectral_bound() const;

  SymmetricOperator scaled(double s) const;
  SymmetricOperator with_rank_one(double coeff, Vec direction) const;

  DenseMatrix materialize() const;  // small-d test support

 private:
  int dim_;
  std::vector<Triplet> sparse_part_;
  std::vector<RankOneTerm> rank_one_terms_;
};

// -A + coeff * x xᵀ built in one pass (the eigenvector problem solved by the
// regularized solvers); `x` must be unit.
SymmetricOperator regularized_negation(const SymmetricOperator& a, double coeff, const Vec& x);

}  // namespace scg
