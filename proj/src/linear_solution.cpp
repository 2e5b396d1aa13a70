#include "mapode/linear_solution.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "mapode/errors.hpp"
#include "mapode/rational.hpp"

namespace mapode {

namespace {

using Complex = std::complex<double>;
using Poly = std::vector<Rational>;  // lowest power first, trimmed

Poly trim(Poly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

Poly poly_mod(Poly a, const Poly& b) {
  a = trim(std::move(a));
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    size_t off = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    a = trim(std::move(a));
  }
  return a;
}

// True iff the characteristic polynomial mu^N/N! + ... + mu + alpha has a
// multiple root; exact rational arithmetic, alpha as the binary fraction of
// the stored double.
bool has_multiple_root(int order, double alpha) {
  Poly p;
  p.push_back(Rational::from_double(alpha));
  for (int j = 1; j <= order; ++j) p.push_back(Rational::inv_factorial(static_cast<unsigned>(j)));
  Poly dp(p.size() - 1);
  for (size_t k = 0; k + 1 < p.size(); ++k)
    dp[k] = p[k + 1] * Rational{static_cast<long long>(k + 1)};
  Poly a = trim(std::move(p)), b = trim(std::move(dp));
  while (!b.empty()) {
    Poly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.size() >= 2;
}

std::vector<Complex> companion_eigenvalues(const LinearizedSystem& ls) {
  const auto n = static_cast<Eigen::Index>(ls.order);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = ls.companion[static_cast<size_t>(i * n + j)];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigendecompose: QR iteration failed");
  std::vector<Complex> mu(static_cast<size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) mu[static_cast<size_t>(k)] = solver.eigenvalues()(k);
  std::sort(mu.begin(), mu.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    double ia = std::abs(a.imag()), ib = std::abs(b.imag());
    if (ia != ib) return ia < ib;
    return a.imag() < b.imag();
  });
  return mu;
}

}  // namespace

EigenSolution eigendecompose(const LinearizedSystem& ls) {
  if (has_multiple_root(ls.order, ls.alpha))
    throw DegenerateSpectrum("eigendecompose: characteristic polynomial has a multiple root");

  EigenSolution sol;
  sol.eigenvalues = companion_eigenvalues(ls);
  const auto n = static_cast<size_t>(ls.order);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (std::abs(sol.eigenvalues[i] - sol.eigenvalues[j]) < 1e-8)
        throw DegenerateSpectrum("eigendecompose: eigenvalue pair closer than 1e-8");

  sol.similarity = smallmat::CMat(n);
  for (size_t col = 0; col < n; ++col) {
    Complex pw = 1.0;
    double maxmod = 0.0;
    for (size_t row = 0; row < n; ++row) {
      sol.similarity.at(row, col) = pw;
      maxmod = std::max(maxmod, std::abs(pw));
      pw *= sol.eigenvalues[col];
    }
    for (size_t row = 0; row < n; ++row) sol.similarity.at(row, col) /= maxmod;
  }
  sol.s_inverse = smallmat::inverse(sol.similarity);
  sol.condition = smallmat::norm_1(sol.similarity) * smallmat::norm_1(sol.s_inverse);
  return sol;
}

std::vector<double> propagate_closed(const LinearizedSystem& ls,
                                     const std::vector<double>& xi0, double t) {
  const auto n = static_cast<size_t>(ls.order);
  if (xi0.size() != n) throw DomainError("propagate_closed: state dimension mismatch");
  if (t < 0.0) throw DomainError("propagate_closed: t must be nonnegative");
  if (t == 0.0) return xi0;

  EigenSolution eig = eigendecompose(ls);
  std::vector<Complex> y(n), w(n);
  for (size_t i = 0; i < n; ++i) {
    Complex ay = 0.0, aw = 0.0;
    for (size_t j = 0; j < n; ++j) {
      ay += eig.s_inverse.at(i, j) * xi0[j];
      aw += eig.s_inverse.at(i, j) * ls.inhomogeneous[j];
    }
    y[i] = ay;
    w[i] = aw;
  }
  std::vector<Complex> z(n);
  for (size_t k = 0; k < n; ++k) {
    const Complex mu = eig.eigenvalues[k];
    const Complex growth = std::exp(mu * t);
    // (e^{mu t} - 1)/mu -> t + mu t^2/2 as mu -> 0 keeps the formula
    // continuous through alpha = 0.
    const Complex drive =
        std::abs(mu) < 1e-10 ? Complex{t} + mu * (t * t / 2.0) : (growth - 1.0) / mu;
    z[k] = growth * y[k] + drive * w[k];
  }
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    Complex acc = 0.0;
    for (size_t k = 0; k < n; ++k) acc += eig.similarity.at(i, k) * z[k];
    out[i] = acc.real();
  }
  return out;
}

std::vector<double> propagate_series(const LinearizedSystem& ls,
                                     const std::vector<double>& xi0, double t) {
  const auto n = static_cast<size_t>(ls.order);
  if (xi0.size() != n) throw DomainError("propagate_series: state dimension mismatch");
  if (t < 0.0) throw DomainError("propagate_series: t must be nonnegative");
  if (t == 0.0) return xi0;

  // exp([[M, v], [0, 0]] t) = [[exp(Mt), int_0^t exp(Ms) ds v], [0, 1]]:
  // state and forcing integral come out of one exponential.
  smallmat::Mat b(n + 1);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) b.at(i, j) = ls.companion[i * n + j] * t;
    b.at(i, n) = ls.inhomogeneous[i] * t;
  }
  smallmat::Mat e = smallmat::expm(b);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    double acc = e.at(i, n);
    for (size_t j = 0; j < n; ++j) acc += e.at(i, j) * xi0[j];
    out[i] = acc;
  }
  return out;
}

}  // namespace mapode
