#include "scg/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace scg {

void DenseMatrix::add_outer(double coeff, const Vec& u) {
  const int n = rows_;
  for (int i = 0; i < n; ++i) {
    const double cu = coeff * u[static_cast<std::size_t>(i)];
    double* row = &data_[static_cast<std::size_t>(i) * cols_];
    for (int j = 0; j < n; ++j) row[j] += cu * u[static_cast<std::size_t>(j)];
  }
}

void DenseMatrix::add_scaled(double alpha, const DenseMatrix& other) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * other.data_[i];
}

Vec DenseMatrix::apply(const Vec& v) const {
  Vec out(static_cast<std::size_t>(rows_), 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double* row = &data_[static_cast<std::size_t>(i) * cols_];
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += row[j] * v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vec DenseMatrix::column(int j) const {
  Vec c(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) c[static_cast<std::size_t>(i)] = (*this)(i, j);
  return c;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double DenseMatrix::trace() const {
  double s = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

double DenseMatrix::max_abs_asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  return worst;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out = a;
  out.add_scaled(-1.0, b);
  return out;
}

EigenDecomposition dense_eigendecomposition(const DenseMatrix& m, int cap) {
  const int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("eigendecomposition requires a square matrix");
  if (n > cap)
    throw std::invalid_argument("dense eigendecomposition refused: dimension " +
                                std::to_string(n) + " exceeds cap " + std::to_string(cap));
  if (m.max_abs_asymmetry() > 1e-10)
    throw std::invalid_argument("dense eigendecomposition requires a symmetric matrix");

  DenseMatrix a = m;
  // symmetrize away sub-1e-10 noise so rotations stay consistent
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  DenseMatrix v = DenseMatrix::identity(n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };

  const double scale = std::max(a.frobenius_norm(), 1e-300);
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= 1e-15 * scale) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // rows/cols p and q of A
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  out.eigenvectors = DenseMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    const int src = order[static_cast<std::size_t>(j)];
    out.eigenvalues[static_cast<std::size_t>(j)] = a(src, src);
    for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, src);
  }
  return out;
}

DenseMatrix reconstruct(const EigenDecomposition& eig) {
  const int n = eig.eigenvectors.rows();
  DenseMatrix m(n, n);
  for (int j = 0; j < n; ++j) m.add_outer(eig.eigenvalues[static_cast<std::size_t>(j)], eig.eigenvectors.column(j));
  return m;
}

}  // namespace scg
