#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "mapode/errors.hpp"
#include "mapode/stability.hpp"

using mapode::BigInt;
using mapode::char_poly;
using mapode::CharPoly;
using mapode::closed_form_u;
using mapode::hurwitz_sequence;
using mapode::Rational;
using mapode::roots;
using mapode::stable_alpha_window;
using mapode::Verdict;

namespace {
const std::vector<Rational> kAlphaGrid = {
    Rational{-10}, Rational{-1}, Rational{-1, 3}, Rational{0},
    Rational{1, 2}, Rational{1}, Rational{17, 7}, Rational{10}};
}

TEST_CASE("characteristic coefficients") {
  CharPoly cp = char_poly(3, Rational{2});
  CHECK(cp.coeffs == std::vector<Rational>{Rational{1, 6}, Rational{1, 2}, Rational{1}, Rational{2}});
  cp = char_poly(5, Rational{1});
  CHECK(cp.coeffs == std::vector<Rational>{Rational{1, 120}, Rational{1, 24}, Rational{1, 6},
                                           Rational{1, 2}, Rational{1}, Rational{1}});
  cp = char_poly(1, Rational{7, 3});
  CHECK(cp.coeffs == std::vector<Rational>{Rational{1}, Rational{7, 3}});
  CHECK_THROWS_AS(char_poly(0, Rational{1}), mapode::DomainError);
}

TEST_CASE("Hurwitz minors for order 6 match the printed values") {
  for (const Rational& alpha : {Rational{1}, Rational{-2, 7}}) {
    auto rep = hurwitz_sequence(char_poly(6, alpha));
    REQUIRE(rep.u_sequence.size() == 7);
    CHECK(rep.u_sequence[0] == Rational{1, 720});
    CHECK(rep.u_sequence[1] == Rational{1, 120});
    CHECK(rep.u_sequence[2] == Rational{2, 720 * 24});
    CHECK(rep.u_sequence[3] == Rational{BigInt{-2}, BigInt{720} * BigInt{120} * BigInt{6}});
  }
}

TEST_CASE("order 5 at alpha = 1 is Marginal by the zero rule") {
  auto rep = hurwitz_sequence(char_poly(5, Rational{1}));
  CHECK(rep.u_sequence[3] == Rational{0});
  CHECK(rep.verdict == Verdict::Marginal);
}

TEST_CASE("order 3 at alpha = 2 is Stable") {
  auto rep = hurwitz_sequence(char_poly(3, Rational{2}));
  CHECK(rep.sign_changes == 0);
  CHECK(rep.verdict == Verdict::Stable);
}

TEST_CASE("closed forms") {
  auto u7 = closed_form_u(7, Rational{3});
  REQUIRE(u7.size() == 4);
  CHECK(u7[3] == Rational{BigInt{-4}, BigInt{5040} * BigInt{720} * BigInt{24}});

  auto u5 = closed_form_u(5, Rational{5, 3});
  REQUIRE(u5.size() == 5);
  CHECK(u5[4] == Rational{-20, 9} / Rational{14400});

  u5 = closed_form_u(5, Rational{0});
  CHECK(u5[3] == Rational{-1, 120 * 24});

  CHECK_THROWS_AS(closed_form_u(4, Rational{1}), mapode::DomainError);
}

TEST_CASE("determinant engine equals closed forms exactly over the grid") {
  for (int n = 5; n <= 12; ++n) {
    for (const Rational& alpha : kAlphaGrid) {
      auto closed = closed_form_u(n, alpha);
      auto rep = hurwitz_sequence(char_poly(n, alpha));
      REQUIRE(rep.u_sequence.size() >= closed.size());
      for (size_t j = 0; j < closed.size(); ++j) CHECK(rep.u_sequence[j] == closed[j]);
    }
  }
}

TEST_CASE("orders 5..12 are never Stable") {
  for (int n = 5; n <= 12; ++n) {
    for (const Rational& alpha : kAlphaGrid) {
      auto rep = hurwitz_sequence(char_poly(n, alpha));
      CHECK(rep.verdict != Verdict::Stable);
      CHECK(rep.sign_changes >= 1);
    }
  }
}

TEST_CASE("order 5 sign pattern: U_4 < 0 everywhere, U_3 flips at alpha = 1") {
  for (const Rational& alpha : kAlphaGrid) {
    auto rep = hurwitz_sequence(char_poly(5, alpha));
    CHECK(rep.u_sequence[4].signum() == -1);
    CHECK(rep.u_sequence[3].signum() == (alpha - Rational{1}).signum());
  }
}

TEST_CASE("characteristic roots") {
  SUBCASE("order 3 at alpha = 3 factors as (mu+3)(mu^2+6)") {
    auto r = roots(char_poly(3, Rational{3}));
    REQUIRE(r.size() == 3);
    const double s6 = std::sqrt(6.0);
    CHECK(std::abs(r[0] - std::complex<double>(-3, 0)) < 1e-8);
    CHECK(std::abs(r[1] - std::complex<double>(0, -s6)) < 1e-8);
    CHECK(std::abs(r[2] - std::complex<double>(0, s6)) < 1e-8);
  }
  SUBCASE("order 1 root is -alpha") {
    auto r = roots(char_poly(1, Rational{5, 2}));
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0] - std::complex<double>(-2.5, 0)) < 1e-12);
  }
  SUBCASE("order 2 at alpha = 1/2 is a double root at -1") {
    auto r = roots(char_poly(2, Rational{1, 2}));
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0] - std::complex<double>(-1, 0)) < 1e-4);
    CHECK(std::abs(r[1] - std::complex<double>(-1, 0)) < 1e-4);
  }
}

TEST_CASE("root sets are closed under conjugation") {
  for (int n : {2, 3, 4, 6, 8}) {
    for (const Rational& alpha : kAlphaGrid) {
      auto r = roots(char_poly(n, alpha));
      for (const auto& z : r) {
        double best = 1e300;
        for (const auto& w : r) best = std::min(best, std::abs(w - std::conj(z)));
        CHECK(best < 1e-10);
      }
    }
  }
}

TEST_CASE("sign changes count right-half-plane roots") {
  for (int n = 1; n <= 8; ++n) {
    for (const Rational& alpha : kAlphaGrid) {
      auto r = roots(char_poly(n, alpha));
      bool near_axis = false;
      int rhp = 0;
      for (const auto& z : r) {
        near_axis = near_axis || std::abs(z.real()) < 1e-7;
        if (z.real() > 0) ++rhp;
      }
      if (near_axis) continue;
      auto rep = hurwitz_sequence(char_poly(n, alpha));
      CHECK(rep.sign_changes == rhp);
    }
  }
}

TEST_CASE("stable alpha windows") {
  auto w3 = stable_alpha_window(3);
  REQUIRE(w3.has_value());
  CHECK(std::abs(w3->first - 0.0) < 1e-6);
  CHECK(std::abs(w3->second - 3.0) < 1e-6);

  auto w4 = stable_alpha_window(4);
  REQUIRE(w4.has_value());
  CHECK(std::abs(w4->first - 0.0) < 1e-6);
  CHECK(std::abs(w4->second - 1.5) < 1e-6);

  CHECK_FALSE(stable_alpha_window(5).has_value());
  CHECK_FALSE(stable_alpha_window(6).has_value());

  // First- and second-order truncations are stable for any positive alpha
  // in the search range.
  auto w1 = stable_alpha_window(1);
  REQUIRE(w1.has_value());
  CHECK(std::abs(w1->first - 0.0) < 1e-6);
  CHECK(std::abs(w1->second - 100.0) < 1e-6);
}

TEST_CASE("general-coefficient Hurwitz sequence handles the scaled cubic") {
  // mu^3 + mu^2 + nu mu + lambda about X = lambda: stable iff 0 < lambda < nu.
  auto report = [](const Rational& nu, const Rational& lambda) {
    return mapode::hurwitz_sequence_coeffs({Rational{1}, Rational{1}, nu, lambda});
  };
  CHECK(report(Rational{2, 3}, Rational{1, 2}).verdict == Verdict::Stable);
  CHECK(report(Rational{2, 3}, Rational{9, 10}).verdict == Verdict::Unstable);
  CHECK(report(Rational{2, 3}, Rational{2, 3}).verdict == Verdict::Marginal);
  CHECK(report(Rational{2, 3}, Rational{-1, 10}).verdict == Verdict::Unstable);
}
