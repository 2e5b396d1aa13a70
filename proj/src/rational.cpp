#include "mapode/rational.hpp"

#include <cmath>

#include "mapode/errors.hpp"

namespace mapode {

Rational::Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void Rational::normalize() {
  if (den_.is_zero()) throw DomainError("Rational: zero denominator");
  if (num_.is_zero()) {
    den_ = BigInt{1};
    return;
  }
  if (den_.signum() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = BigInt::gcd(num_, den_);
  if (!(g == BigInt{1})) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::from_double(double d) {
  if (!std::isfinite(d)) throw DomainError("Rational::from_double: non-finite input");
  if (d == 0.0) return Rational{};
  int exp = 0;
  double frac = std::frexp(d, &exp);       // frac in [0.5, 1)
  auto mant = static_cast<long long>(std::ldexp(frac, 53));  // exact 53-bit integer
  exp -= 53;
  if (exp >= 0) return Rational{BigInt{mant}.shifted_left(static_cast<unsigned>(exp)), BigInt{1}};
  return Rational{BigInt{mant}, BigInt::pow2(static_cast<unsigned>(-exp))};
}

Rational Rational::from_string(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational{BigInt::from_string(s), BigInt{1}};
  return Rational{BigInt::from_string(s.substr(0, slash)),
                  BigInt::from_string(s.substr(slash + 1))};
}

Rational Rational::inv_factorial(unsigned n) {
  return Rational{BigInt{1}, BigInt::factorial(n)};
}

Rational Rational::operator-() const {
  Rational out = *this;
  out.num_ = -out.num_;
  return out;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational{a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational{a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational{a.num_ * b.num_, a.den_ * b.den_};
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw DomainError("Rational: division by zero");
  return Rational{a.num_ * b.den_, a.den_ * b.num_};
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return a.num_ * b.den_ <=> b.num_ * a.den_;
}

double Rational::to_double() const {
  if (num_.is_zero()) return 0.0;
  // Align both operands to ~63 significant bits before the double divide so
  // huge values cannot overflow on the way through.
  const auto bn = static_cast<long>(num_.bit_length());
  const auto bd = static_cast<long>(den_.bit_length());
  long shift_n = bn > 63 ? bn - 63 : 0;
  long shift_d = bd > 63 ? bd - 63 : 0;
  BigInt n = shift_n > 0 ? num_ / BigInt::pow2(static_cast<unsigned>(shift_n)) : num_;
  BigInt d = shift_d > 0 ? den_ / BigInt::pow2(static_cast<unsigned>(shift_d)) : den_;
  return std::ldexp(n.to_double() / d.to_double(), static_cast<int>(shift_n - shift_d));
}

std::string Rational::to_string() const {
  if (den_ == BigInt{1}) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

}  // namespace mapode
