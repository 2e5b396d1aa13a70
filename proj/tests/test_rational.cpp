#include <doctest.h>

#include <cmath>
#include <random>

#include "mapode/errors.hpp"
#include "mapode/rational.hpp"

using mapode::BigInt;
using mapode::Rational;

TEST_CASE("normalization") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0, -7).den() == BigInt(1));
  CHECK_THROWS_AS(Rational(1, 0), mapode::DomainError);
}

TEST_CASE("field axioms on random values") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long long> dist(-2000, 2000);
  for (int i = 0; i < 500; ++i) {
    Rational a(dist(rng), 1 + std::abs(dist(rng)));
    Rational b(dist(rng), 1 + std::abs(dist(rng)));
    Rational c(dist(rng), 1 + std::abs(dist(rng)));
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Rational(0));
    if (!b.is_zero()) CHECK((a / b) * b == a);
  }
}

TEST_CASE("ordering is exact") {
  CHECK(Rational(1, 3) < Rational(34, 100));
  CHECK(Rational(-1, 3) > Rational(-34, 100));
  CHECK(Rational(5, 3) == Rational::from_string("5/3"));
  CHECK(Rational::from_string("-7") == Rational(-7));
}

TEST_CASE("from_double is the exact binary fraction") {
  CHECK(Rational::from_double(0.5) == Rational(1, 2));
  CHECK(Rational::from_double(-0.75) == Rational(-3, 4));
  CHECK(Rational::from_double(3.0) == Rational(3));
  CHECK(Rational::from_double(0.0) == Rational(0));
  // 0.1 is not 1/10 in binary; the conversion must preserve the double bit
  // pattern, so to_double round-trips exactly.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 300; ++i) {
    double d = dist(rng);
    CHECK(Rational::from_double(d).to_double() == d);
  }
  CHECK(Rational::from_double(0.1) != Rational(1, 10));
  CHECK_THROWS_AS(Rational::from_double(std::nan("")), mapode::DomainError);
}

TEST_CASE("to_double survives factorial-scale magnitudes") {
  Rational tiny = Rational::inv_factorial(40);
  CHECK(tiny.to_double() == doctest::Approx(1.225617439128386e-48).epsilon(1e-12));
  Rational big = Rational(BigInt::factorial(35), BigInt::factorial(12));
  CHECK(big.to_double() == doctest::Approx(2.1572261901392697e31).epsilon(1e-12));
}

TEST_CASE("printing") {
  CHECK(Rational(5, 3).to_string() == "5/3");
  CHECK(Rational(-1, 259200).to_string() == "-1/259200");
  CHECK(Rational(4, 2).to_string() == "2");
  CHECK(Rational(0).to_string() == "0");
}
