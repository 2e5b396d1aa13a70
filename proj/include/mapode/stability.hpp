#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "mapode/rational.hpp"

namespace mapode {

// Characteristic polynomial of the order-N truncation linearized at a
// reference point: sum_{j=1..N} mu^j / j! + alpha. Coefficients are stored
// highest power first: a_j = 1/(N-j)! for j < N and a_N = alpha.
struct CharPoly {
  int order = 0;
  std::vector<Rational> coeffs;  // size order + 1, a_0 ... a_N
};

CharPoly char_poly(int order, const Rational& alpha);

enum class Verdict { Stable, Unstable, Marginal };

const char* to_string(Verdict v);

// Hurwitz minor sequence U_0..U_N with sign-change count. With no zero
// entries, sign_changes equals the number of characteristic roots in the
// open right half plane (Routh-Hurwitz); any exact zero makes the verdict
// Marginal and the count is over the zero-stripped sequence.
struct HurwitzReport {
  std::vector<Rational> u_sequence;
  int sign_changes = 0;
  int n_unstable_roots = 0;
  Verdict verdict = Verdict::Marginal;
};

HurwitzReport hurwitz_sequence(const CharPoly& cp);
// Same machinery for an arbitrary real-coefficient polynomial
// a_0 mu^n + ... + a_n given highest power first. a_0 must be nonzero.
HurwitzReport hurwitz_sequence_coeffs(const std::vector<Rational>& coeffs);

// The printed closed forms: for N > 5 returns [U_0..U_3], for N = 5 returns
// [U_0..U_4]. Independent of the determinant engine. N <= 4 is unsupported.
std::vector<Rational> closed_form_u(int order, const Rational& alpha);

// All roots of the characteristic polynomial by simultaneous (Durand-Kerner)
// iteration; conjugate-symmetrized and sorted by (Re, |Im|, Im).
std::vector<std::complex<double>> roots(const CharPoly& cp);

// General form: coefficients lowest power first (c[0] + c[1] x + ...),
// leading coefficient nonzero.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs_low_first);

// Maximal alpha interval (within [-100, 100], endpoints resolved to 1e-9)
// whose verdict is Stable; nullopt when no stable alpha exists. 1 <= N <= 8.
std::optional<std::pair<double, double>> stable_alpha_window(int order);

}  // namespace mapode
