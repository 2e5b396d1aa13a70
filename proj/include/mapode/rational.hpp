#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "mapode/bigint.hpp"

namespace mapode {

// Exact rational with BigInt numerator/denominator. Always normalized:
// den > 0, gcd(num, den) = 1, zero is 0/1.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}  // NOLINT: implicit by design
  Rational(long long num, long long den);
  Rational(BigInt num, BigInt den);

  // Exact binary-fraction representation of a finite double.
  static Rational from_double(double d);
  // Accepts "a/b" or a plain (signed) integer. No decimal points here;
  // decimal text goes through from_double at the parsing layer.
  static Rational from_string(std::string_view s);
  static Rational inv_factorial(unsigned n);  // 1/n!

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  int signum() const { return num_.signum(); }

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  double to_double() const;
  std::string to_string() const;  // "n" when den == 1, else "n/d"

private:
  void normalize();

  BigInt num_, den_;
};

}  // namespace mapode
