#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace scg {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

// y += alpha * x
inline void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(Vec& v, double s) {
  for (double& x : v) x *= s;
}

inline Vec normalized(Vec v) {
  const double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero vector");
  scale(v, 1.0 / n);
  return v;
}

inline bool is_unit(const Vec& v, double tol = 1e-10) {
  return std::abs(norm(v) - 1.0) <= tol;
}

inline Vec basis_vector(int dim, int index) {
  Vec e(static_cast<std::size_t>(dim), 0.0);
  e[static_cast<std::size_t>(index)] = 1.0;
  return e;
}

}  // namespace scg
