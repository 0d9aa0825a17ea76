// Reference dense linear algebra for test oracles: plain Gaussian elimination
// with partial pivoting, independent of the Eigen paths used by the library.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace linref {

using Matrix = std::vector<std::vector<double>>;
using Vector = std::vector<double>;

inline Vector solve(Matrix a, Vector b) {
  const std::size_t n = a.size();
  if (n == 0 || b.size() != n) throw std::invalid_argument("bad system size");
  for (auto& row : a) {
    if (row.size() != n) throw std::invalid_argument("matrix not square");
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (std::fabs(a[pivot][col]) < 1e-300) {
      throw std::runtime_error("reference solve: singular matrix");
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

inline Matrix inverse(const Matrix& a) {
  const std::size_t n = a.size();
  Matrix inv(n, Vector(n, 0.0));
  for (std::size_t col = 0; col < n; ++col) {
    Vector e(n, 0.0);
    e[col] = 1.0;
    const Vector x = solve(a, e);
    for (std::size_t r = 0; r < n; ++r) inv[r][col] = x[r];
  }
  return inv;
}

inline Vector matvec(const Matrix& a, const Vector& x) {
  Vector y(a.size(), 0.0);
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < x.size(); ++c) y[r] += a[r][c] * x[c];
  }
  return y;
}

inline double dot(const Vector& a, const Vector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace linref
