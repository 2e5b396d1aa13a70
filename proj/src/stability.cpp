#include "mapode/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mapode/errors.hpp"

namespace mapode {

namespace {

using Complex = std::complex<double>;

Complex eval_poly(const std::vector<Complex>& c, Complex x) {
  Complex acc = 0.0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

// Relative residual |p(z)| / sum_j |c_j||z|^j.
double residual(const std::vector<Complex>& c, Complex z) {
  double scale = 0.0, xa = std::abs(z), pw = 1.0;
  for (const Complex& cj : c) {
    scale += std::abs(cj) * pw;
    pw *= xa;
  }
  if (scale == 0.0) return 0.0;
  return std::abs(eval_poly(c, z)) / scale;
}

// Pull conjugate partners together exactly and zero out stray imaginary
// parts on real roots; real coefficients guarantee the symmetric spectrum.
// Multiple roots limit the attainable accuracy to ~sqrt(residual), so the
// pairing threshold is far looser than the residual tolerance.
void conjugate_symmetrize(std::vector<Complex>& r) {
  std::vector<bool> used(r.size(), false);
  for (size_t i = 0; i < r.size(); ++i) {
    if (std::abs(r[i].imag()) < 1e-10 * std::max(1.0, std::abs(r[i]))) {
      r[i] = Complex(r[i].real(), 0.0);
      used[i] = true;  // certainly real: never paired
    }
  }
  for (size_t i = 0; i < r.size(); ++i) {
    if (used[i] || r[i].imag() <= 0.0) continue;
    size_t best = r.size();
    double best_d = 1e-4 * std::max(1.0, std::abs(r[i]));
    for (size_t j = 0; j < r.size(); ++j) {
      if (j == i || used[j] || r[j].imag() >= 0.0) continue;
      double d = std::abs(r[i] - std::conj(r[j]));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best < r.size()) {
      Complex avg = 0.5 * (r[i] + std::conj(r[best]));
      r[i] = avg;
      r[best] = std::conj(avg);
      used[i] = used[best] = true;
    }
  }
  for (size_t i = 0; i < r.size(); ++i) {
    if (!used[i] && std::abs(r[i].imag()) < 1e-4 * std::max(1.0, std::abs(r[i]))) {
      r[i] = Complex(r[i].real(), 0.0);
    }
  }
  std::sort(r.begin(), r.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    double ia = std::abs(a.imag()), ib = std::abs(b.imag());
    if (ia != ib) return ia < ib;
    return a.imag() < b.imag();
  });
}

}  // namespace

std::vector<Complex> poly_roots(const std::vector<double>& coeffs_low_first) {
  std::vector<Complex> c(coeffs_low_first.begin(), coeffs_low_first.end());
  while (c.size() > 1 && std::abs(c.back()) == 0.0) c.pop_back();
  if (c.size() <= 1) {
    if (!c.empty() && c[0] == 0.0)
      throw DomainError("poly_roots: zero polynomial");
    return {};
  }
  const size_t n = c.size() - 1;
  if (n == 1) return {Complex(-c[0].real() / c[1].real(), 0.0)};

  // Perturbed-circle start: radius from the Cauchy bound, angles offset so
  // no initial guess sits on the real axis or on a symmetry line.
  double bound = 0.0;
  for (size_t j = 0; j < n; ++j) bound = std::max(bound, std::abs(c[j] / c[n]));
  const double radius = 0.5 + 0.5 * (1.0 + bound);
  std::vector<Complex> z(n);
  for (size_t k = 0; k < n; ++k) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z[k] = radius * Complex(std::cos(angle), std::sin(angle)) + Complex(0.001 * static_cast<double>(k), 0.0);
  }

  const int max_sweeps = 1000;
  const double tol = 1e-10;
  auto do_sweep = [&] {
    for (size_t k = 0; k < n; ++k) {
      Complex denom = c[n];
      for (size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        Complex d = z[k] - z[j];
        if (std::abs(d) < 1e-300) d = Complex(1e-12, 1e-12);
        denom *= d;
      }
      z[k] -= eval_poly(c, z[k]) / denom;
    }
  };
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    do_sweep();
    converged = true;
    for (size_t k = 0; k < n && converged; ++k) converged = residual(c, z[k]) < tol;
  }
  if (!converged) {
    std::vector<double> res(n);
    for (size_t k = 0; k < n; ++k) res[k] = residual(c, z[k]);
    throw NumericError("poly_roots: Durand-Kerner did not converge in 1000 sweeps", res);
  }
  // Two polish sweeps push simple roots to machine precision.
  do_sweep();
  do_sweep();

  conjugate_symmetrize(z);
  return z;
}

CharPoly char_poly(int order, const Rational& alpha) {
  if (order < 1) throw DomainError("char_poly: order must be >= 1");
  CharPoly cp;
  cp.order = order;
  cp.coeffs.reserve(static_cast<size_t>(order) + 1);
  for (int j = 0; j < order; ++j)
    cp.coeffs.push_back(Rational::inv_factorial(static_cast<unsigned>(order - j)));
  cp.coeffs.push_back(alpha);
  return cp;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Marginal: return "Marginal";
  }
  return "?";
}

namespace {

// Exact determinant of the leading k x k minor of an integer matrix:
// fraction-free (Bareiss) elimination with row pivoting. Zero determinants
// are detected exactly when no pivot exists.
BigInt bareiss_minor(std::vector<std::vector<BigInt>> m, size_t k) {
  int sign = 1;
  BigInt prev{1};
  for (size_t col = 0; col + 1 < k; ++col) {
    size_t pivot = col;
    while (pivot < k && m[pivot][col].is_zero()) ++pivot;
    if (pivot == k) return BigInt{0};
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      sign = -sign;
    }
    for (size_t i = col + 1; i < k; ++i) {
      for (size_t j = col + 1; j < k; ++j) {
        m[i][j] = (m[col][col] * m[i][j] - m[i][col] * m[col][j]) / prev;
      }
      m[i][col] = BigInt{0};
    }
    prev = m[col][col];
  }
  BigInt det = m[k - 1][k - 1];
  return sign < 0 ? -det : det;
}

}  // namespace

HurwitzReport hurwitz_sequence_coeffs(const std::vector<Rational>& coeffs_in) {
  if (coeffs_in.size() < 2) throw DomainError("hurwitz_sequence: need degree >= 1");
  if (coeffs_in.front().is_zero())
    throw DomainError("hurwitz_sequence: leading coefficient is zero");
  // Normalize a_0 > 0 (same roots); the criterion assumes it.
  std::vector<Rational> coeffs = coeffs_in;
  if (coeffs.front().signum() < 0)
    for (Rational& c : coeffs) c = -c;
  const size_t n = coeffs.size() - 1;

  // Hurwitz matrix entry (i, j) = a_{2i+1-j}, zero outside [0, n]. Rows are
  // scaled to integers; each row's scale divides out of every leading minor
  // that contains it.
  auto entry = [&](size_t i, size_t j) -> Rational {
    long idx = 2 * static_cast<long>(i) + 1 - static_cast<long>(j);
    if (idx < 0 || idx > static_cast<long>(n)) return Rational{0};
    return coeffs[static_cast<size_t>(idx)];
  };

  std::vector<BigInt> row_scale(n, BigInt{1});
  std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n, BigInt{0}));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) row_scale[i] = BigInt::lcm(row_scale[i], entry(i, j).den());
    for (size_t j = 0; j < n; ++j) {
      Rational e = entry(i, j);
      m[i][j] = e.num() * (row_scale[i] / e.den());
    }
  }

  HurwitzReport report;
  report.u_sequence.reserve(n + 1);
  report.u_sequence.push_back(coeffs[0]);  // U_0 = a_0
  BigInt scale{1};
  for (size_t k = 1; k <= n; ++k) {
    scale = scale * row_scale[k - 1];
    report.u_sequence.emplace_back(bareiss_minor(m, k), scale);
  }

  // Right-half-plane root count per Routh-Hurwitz: sign flips down the
  // Routh first column {U_0, U_1, U_2/U_1, ..., U_N/U_{N-1}}, taken over the
  // zero-stripped sequence. (Counting adjacent flips of {U_j} itself is a
  // common misstatement and disagrees with the root count, e.g. order 5 at
  // alpha = -1.)
  bool any_zero = false;
  std::vector<int> signs;
  for (const Rational& u : report.u_sequence) {
    int s = u.signum();
    if (s == 0) {
      any_zero = true;
    } else {
      signs.push_back(s);
    }
  }
  int changes = 0;
  int prev_col = 1;  // c_0 = U_0 = a_0 > 0
  for (size_t k = 1; k < signs.size(); ++k) {
    int col = signs[k] * signs[k - 1];
    if (col != prev_col) ++changes;
    prev_col = col;
  }
  report.sign_changes = changes;
  report.n_unstable_roots = changes;
  if (any_zero) {
    report.verdict = Verdict::Marginal;
  } else if (changes >= 1) {
    report.verdict = Verdict::Unstable;
  } else {
    report.verdict = coeffs[n].signum() > 0 ? Verdict::Stable : Verdict::Marginal;
  }
  return report;
}

HurwitzReport hurwitz_sequence(const CharPoly& cp) { return hurwitz_sequence_coeffs(cp.coeffs); }

std::vector<Rational> closed_form_u(int order, const Rational& alpha) {
  if (order < 5) throw DomainError("closed_form_u: no closed form below order 5");
  const auto n = static_cast<unsigned>(order);
  std::vector<Rational> u;
  u.push_back(Rational::inv_factorial(n));
  u.push_back(Rational::inv_factorial(n - 1));
  u.push_back(Rational{2} / Rational{BigInt::factorial(n) * BigInt::factorial(n - 2), BigInt{1}});
  if (order == 5) {
    // U_3 = (alpha - 1)/(5! 4!), U_4 = -((alpha - 5/3)^2 + 20/9)/(5!)^2
    u.push_back((alpha - Rational{1}) / Rational{120 * 24});
    Rational shifted = alpha - Rational{5, 3};
    u.push_back(-(shifted * shifted + Rational{20, 9}) / Rational{120 * 120});
  } else {
    // U_3 = -2(N-5)/(N!(N-1)!(N-3)!)
    BigInt denom = BigInt::factorial(n) * BigInt::factorial(n - 1) * BigInt::factorial(n - 3);
    u.push_back(Rational{BigInt{-2 * (order - 5)}, denom});
  }
  return u;
}

std::vector<Complex> roots(const CharPoly& cp) {
  std::vector<double> low_first(cp.coeffs.size());
  for (size_t j = 0; j < cp.coeffs.size(); ++j)
    low_first[cp.coeffs.size() - 1 - j] = cp.coeffs[j].to_double();
  return poly_roots(low_first);
}

std::optional<std::pair<double, double>> stable_alpha_window(int order) {
  if (order < 1 || order > 8) throw DomainError("stable_alpha_window: order must be in [1, 8]");
  const Rational lo_bound{-100}, hi_bound{100};
  const Rational step{1, 8};

  auto stable_at = [&](const Rational& alpha) {
    return hurwitz_sequence(char_poly(order, alpha)).verdict == Verdict::Stable;
  };

  // Coarse scan, then take the longest maximal stable run.
  const int n_steps = 1601;  // -100 .. 100 by 1/8
  std::vector<bool> stable(n_steps);
  bool any = false;
  for (int i = 0; i < n_steps; ++i) {
    stable[i] = stable_at(lo_bound + step * Rational{i});
    any = any || stable[i];
  }
  if (!any) return std::nullopt;

  int best_start = -1, best_len = 0;
  for (int i = 0; i < n_steps;) {
    if (!stable[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j < n_steps && stable[j]) ++j;
    if (j - i > best_len) {
      best_len = j - i;
      best_start = i;
    }
    i = j;
  }
  const int first = best_start, last = best_start + best_len - 1;

  const Rational resolution{1, 2000000000};  // < 1e-9
  auto bisect = [&](Rational inside, Rational outside) {
    // Invariant: stable_at(inside), !stable_at(outside).
    while ((inside > outside ? inside - outside : outside - inside) > resolution) {
      Rational mid = (inside + outside) / Rational{2};
      (stable_at(mid) ? inside : outside) = mid;
    }
    return (inside + outside) / Rational{2};
  };

  Rational left = lo_bound + step * Rational{first};
  Rational right = lo_bound + step * Rational{last};
  double lo = first == 0 ? lo_bound.to_double() : bisect(left, left - step).to_double();
  double hi = last == n_steps - 1 ? hi_bound.to_double() : bisect(right, right + step).to_double();
  return std::make_pair(lo, hi);
}

}  // namespace mapode
