#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "mapode/errors.hpp"

// Dense helpers for the tiny (N <= ~21) matrices this project needs.
namespace mapode::smallmat {

struct Mat {
  size_t n = 0;
  std::vector<double> a;  // row-major n x n

  Mat() = default;
  explicit Mat(size_t dim) : n(dim), a(dim * dim, 0.0) {}
  double& at(size_t i, size_t j) { return a[i * n + j]; }
  double at(size_t i, size_t j) const { return a[i * n + j]; }

  static Mat identity(size_t dim) {
    Mat m(dim);
    for (size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

inline Mat operator*(const Mat& x, const Mat& y) {
  Mat out(x.n);
  for (size_t i = 0; i < x.n; ++i)
    for (size_t k = 0; k < x.n; ++k) {
      double v = x.at(i, k);
      if (v == 0.0) continue;
      for (size_t j = 0; j < x.n; ++j) out.at(i, j) += v * y.at(k, j);
    }
  return out;
}

inline double norm_inf(const Mat& m) {
  double best = 0.0;
  for (size_t i = 0; i < m.n; ++i) {
    double row = 0.0;
    for (size_t j = 0; j < m.n; ++j) row += std::abs(m.at(i, j));
    best = std::max(best, row);
  }
  return best;
}

// Solves A X = B in place of B (partial pivoting); A is destroyed.
inline void lu_solve(Mat a, Mat& b) {
  const size_t n = a.n;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(a.at(r, col)) > std::abs(a.at(piv, col))) piv = r;
    if (a.at(piv, col) == 0.0) throw NumericError("lu_solve: singular matrix");
    if (piv != col) {
      for (size_t j = 0; j < n; ++j) std::swap(a.a[piv * n + j], a.a[col * n + j]);
      for (size_t j = 0; j < n; ++j) std::swap(b.a[piv * n + j], b.a[col * n + j]);
    }
    const double inv = 1.0 / a.at(col, col);
    for (size_t r = col + 1; r < n; ++r) {
      double f = a.at(r, col) * inv;
      if (f == 0.0) continue;
      for (size_t j = col; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
      for (size_t j = 0; j < n; ++j) b.at(r, j) -= f * b.at(col, j);
    }
  }
  for (size_t col = n; col-- > 0;) {
    const double inv = 1.0 / a.at(col, col);
    for (size_t j = 0; j < n; ++j) {
      double acc = b.at(col, j);
      for (size_t k = col + 1; k < n; ++k) acc -= a.at(col, k) * b.at(k, j);
      b.at(col, j) = acc * inv;
    }
  }
}

// exp(M) by [6/6] Pade with scaling and squaring (Moler & Van Loan method 3).
inline Mat expm(const Mat& m) {
  const size_t n = m.n;
  const double norm = norm_inf(m);
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  Mat a = m;
  const double scale = std::ldexp(1.0, -s);
  for (double& v : a.a) v *= scale;

  const int q = 6;
  Mat x = a;
  Mat e = Mat::identity(n), d = Mat::identity(n);
  double c = 0.5;
  for (size_t i = 0; i < n * n; ++i) {
    e.a[i] += c * a.a[i];
    d.a[i] -= c * a.a[i];
  }
  bool plus = true;  // denominator signs alternate as (-1)^k
  for (int k = 2; k <= q; ++k) {
    c *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
    x = a * x;
    for (size_t i = 0; i < n * n; ++i) {
      e.a[i] += c * x.a[i];
      d.a[i] += (plus ? c : -c) * x.a[i];
    }
    plus = !plus;
  }
  lu_solve(d, e);  // e := d^-1 e
  for (int k = 0; k < s; ++k) e = e * e;
  return e;
}

using Complex = std::complex<double>;

struct CMat {
  size_t n = 0;
  std::vector<Complex> a;

  CMat() = default;
  explicit CMat(size_t dim) : n(dim), a(dim * dim) {}
  Complex& at(size_t i, size_t j) { return a[i * n + j]; }
  const Complex& at(size_t i, size_t j) const { return a[i * n + j]; }
};

// Gauss-Jordan inverse with partial pivoting.
inline CMat inverse(CMat m) {
  const size_t n = m.n;
  CMat inv(n);
  for (size_t i = 0; i < n; ++i) inv.at(i, i) = 1.0;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(m.at(r, col)) > std::abs(m.at(piv, col))) piv = r;
    if (std::abs(m.at(piv, col)) == 0.0) throw NumericError("inverse: singular matrix");
    if (piv != col) {
      for (size_t j = 0; j < n; ++j) {
        std::swap(m.a[piv * n + j], m.a[col * n + j]);
        std::swap(inv.a[piv * n + j], inv.a[col * n + j]);
      }
    }
    const Complex d = m.at(col, col);
    for (size_t j = 0; j < n; ++j) {
      m.at(col, j) /= d;
      inv.at(col, j) /= d;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = m.at(r, col);
      if (f == Complex{}) continue;
      for (size_t j = 0; j < n; ++j) {
        m.at(r, j) -= f * m.at(col, j);
        inv.at(r, j) -= f * inv.at(col, j);
      }
    }
  }
  return inv;
}

inline double norm_1(const CMat& m) {
  double best = 0.0;
  for (size_t j = 0; j < m.n; ++j) {
    double col = 0.0;
    for (size_t i = 0; i < m.n; ++i) col += std::abs(m.at(i, j));
    best = std::max(best, col);
  }
  return best;
}

}  // namespace mapode::smallmat
