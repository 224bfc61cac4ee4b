#pragma once

#include <cstddef>
#include <vector>

#include "scg/vec.hpp"

namespace scg {

// Everything dense in this library is desk-scale test/oracle support; routines
// that would silently crawl past this size refuse instead.
inline constexpr int kDenseOracleCap = 500;

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {}

  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  // m += coeff * u uᵀ (square only)
  void add_outer(double coeff, const Vec& u);
  // m += alpha * other
  void add_scaled(double alpha, const DenseMatrix& other);

  Vec apply(const Vec& v) const;
  DenseMatrix transposed() const;
  Vec column(int j) const;

  double frobenius_norm() const;
  double trace() const;
  double max_abs_asymmetry() const;  // max |m_ij − m_ji|

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);

struct EigenDecomposition {
  Vec eigenvalues;          // descending
  DenseMatrix eigenvectors; // orthonormal columns, aligned with eigenvalues
};

// Full eigendecomposition of a real symmetric matrix by cyclic Jacobi
// rotations. Oracle/test support: refuses above `cap`, rejects inputs that are
// asymmetric beyond 1e-10.
EigenDecomposition dense_eigendecomposition(const DenseMatrix& m, int cap = kDenseOracleCap);

// V diag(lambda) Vᵀ
DenseMatrix reconstruct(const EigenDecomposition& eig);

}  // namespace scg
