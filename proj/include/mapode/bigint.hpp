#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mapode {

// Arbitrary-precision signed integer. Sign/magnitude, base 2^32 limbs,
// little-endian. Sized for Hurwitz minors of order <= ~20 (a few hundred
// bits), so all algorithms are the classical schoolbook ones.
class BigInt {
public:
  BigInt() = default;
  BigInt(long long v);  // NOLINT: implicit by design, mirrors int semantics

  static BigInt from_string(std::string_view s);
  static BigInt factorial(unsigned n);
  static BigInt pow2(unsigned bits);

  bool is_zero() const { return sign_ == 0; }
  int signum() const { return sign_; }
  BigInt abs() const;

  BigInt operator-() const;
  friend BigInt operator+(const BigInt& a, const BigInt& b);
  friend BigInt operator-(const BigInt& a, const BigInt& b);
  friend BigInt operator*(const BigInt& a, const BigInt& b);
  // Truncating division, C semantics: quotient rounds toward zero,
  // remainder carries the dividend's sign.
  friend BigInt operator/(const BigInt& a, const BigInt& b);
  friend BigInt operator%(const BigInt& a, const BigInt& b);
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

  BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
  BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
  BigInt& operator*=(const BigInt& o) { return *this = *this * o; }
  BigInt& operator/=(const BigInt& o) { return *this = *this / o; }

  friend bool operator==(const BigInt& a, const BigInt& b);
  friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b);

  static BigInt gcd(BigInt a, BigInt b);  // result >= 0
  static BigInt lcm(const BigInt& a, const BigInt& b);

  BigInt shifted_left(unsigned bits) const;
  // Number of bits in the magnitude; 0 for zero.
  size_t bit_length() const;

  std::string to_string() const;
  double to_double() const;

private:
  friend class BigIntTestPeer;

  void trim();
  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  // Requires |a| >= |b|.
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a,
                                       const std::vector<uint32_t>& b);
  static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                         std::vector<uint32_t>& q, std::vector<uint32_t>& r);

  int sign_ = 0;                // -1, 0, +1
  std::vector<uint32_t> mag_;   // empty iff sign_ == 0
};

}  // namespace mapode
