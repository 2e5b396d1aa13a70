#include "mapode/bigint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "mapode/errors.hpp"

namespace mapode {

namespace {
constexpr uint64_t kBase = uint64_t{1} << 32;
}

BigInt::BigInt(long long v) {
  if (v == 0) return;
  sign_ = v < 0 ? -1 : 1;
  // Avoid overflow on LLONG_MIN by negating in the unsigned domain.
  uint64_t m = v < 0 ? ~static_cast<uint64_t>(v) + 1 : static_cast<uint64_t>(v);
  while (m != 0) {
    mag_.push_back(static_cast<uint32_t>(m & 0xffffffffu));
    m >>= 32;
  }
}

void BigInt::trim() {
  while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  if (mag_.empty()) sign_ = 0;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  const auto& big = a.size() >= b.size() ? a : b;
  const auto& small = a.size() >= b.size() ? b : a;
  std::vector<uint32_t> out(big.size() + 1, 0);
  uint64_t carry = 0;
  for (size_t i = 0; i < big.size(); ++i) {
    uint64_t s = carry + big[i] + (i < small.size() ? small[i] : 0);
    out[i] = static_cast<uint32_t>(s & 0xffffffffu);
    carry = s >> 32;
  }
  out[big.size()] = static_cast<uint32_t>(carry);
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out(a.size(), 0);
  int64_t borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t d = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
    if (d < 0) {
      d += static_cast<int64_t>(kBase);
      borrow = 1;
    } else {
      borrow = 0;
    }
    out[i] = static_cast<uint32_t>(d);
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint32_t> out(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t carry = 0;
    uint64_t ai = a[i];
    for (size_t j = 0; j < b.size(); ++j) {
      uint64_t cur = out[i + j] + ai * b[j] + carry;
      out[i + j] = static_cast<uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    size_t k = i + b.size();
    while (carry != 0) {
      uint64_t cur = out[k] + carry;
      out[k] = static_cast<uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
      ++k;
    }
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

// Knuth TAOCP vol. 2, algorithm D, base 2^32.
void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
  q.clear();
  r.clear();
  if (b.empty()) throw DomainError("BigInt: division by zero");
  if (cmp_mag(a, b) < 0) {
    r = a;
    return;
  }
  if (b.size() == 1) {
    uint64_t d = b[0];
    q.assign(a.size(), 0);
    uint64_t rem = 0;
    for (size_t i = a.size(); i-- > 0;) {
      uint64_t cur = (rem << 32) | a[i];
      q[i] = static_cast<uint32_t>(cur / d);
      rem = cur % d;
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    if (rem != 0) r.push_back(static_cast<uint32_t>(rem));
    return;
  }

  const int shift = std::countl_zero(b.back());
  const size_t n = b.size();
  const size_t m = a.size() - n;

  // Normalized copies: v.back() has its top bit set.
  std::vector<uint32_t> v(n), u(a.size() + 1, 0);
  for (size_t i = n; i-- > 0;) {
    v[i] = b[i] << shift;
    if (shift != 0 && i > 0) v[i] |= b[i - 1] >> (32 - shift);
  }
  for (size_t i = a.size(); i-- > 0;) {
    uint64_t x = static_cast<uint64_t>(a[i]) << shift;
    u[i] |= static_cast<uint32_t>(x & 0xffffffffu);
    u[i + 1] |= static_cast<uint32_t>(x >> 32);
  }

  q.assign(m + 1, 0);
  const uint64_t vtop = v[n - 1];
  const uint64_t vnext = v[n - 2];
  for (size_t j = m + 1; j-- > 0;) {
    uint64_t num = (static_cast<uint64_t>(u[j + n]) << 32) | u[j + n - 1];
    uint64_t qhat, rhat;
    if (u[j + n] == vtop) {
      qhat = kBase - 1;
      rhat = num - qhat * vtop;
    } else {
      qhat = num / vtop;
      rhat = num % vtop;
    }
    while (rhat < kBase && qhat * vnext > ((rhat << 32) | u[j + n - 2])) {
      --qhat;
      rhat += vtop;
    }
    // u[j..j+n] -= qhat * v
    int64_t borrow = 0;
    uint64_t carry = 0;
    for (size_t i = 0; i < n; ++i) {
      uint64_t prod = qhat * v[i] + carry;
      carry = prod >> 32;
      int64_t d = static_cast<int64_t>(u[i + j]) - borrow - static_cast<int64_t>(prod & 0xffffffffu);
      if (d < 0) {
        d += static_cast<int64_t>(kBase);
        borrow = 1;
      } else {
        borrow = 0;
      }
      u[i + j] = static_cast<uint32_t>(d);
    }
    int64_t d = static_cast<int64_t>(u[j + n]) - borrow - static_cast<int64_t>(carry);
    bool negative = d < 0;
    u[j + n] = static_cast<uint32_t>(d + (negative ? static_cast<int64_t>(kBase) : 0));
    if (negative) {
      // qhat was one too large; add v back.
      --qhat;
      uint64_t c = 0;
      for (size_t i = 0; i < n; ++i) {
        uint64_t s = static_cast<uint64_t>(u[i + j]) + v[i] + c;
        u[i + j] = static_cast<uint32_t>(s & 0xffffffffu);
        c = s >> 32;
      }
      u[j + n] = static_cast<uint32_t>(u[j + n] + c);
    }
    q[j] = static_cast<uint32_t>(qhat);
  }
  while (!q.empty() && q.back() == 0) q.pop_back();

  r.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    r[i] = u[i] >> shift;
    if (shift != 0 && i + 1 < u.size()) r[i] |= static_cast<uint32_t>(static_cast<uint64_t>(u[i + 1]) << (32 - shift));
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
}

BigInt BigInt::abs() const {
  BigInt out = *this;
  if (out.sign_ < 0) out.sign_ = 1;
  return out;
}

BigInt BigInt::operator-() const {
  BigInt out = *this;
  out.sign_ = -out.sign_;
  return out;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
  if (a.sign_ == 0) return b;
  if (b.sign_ == 0) return a;
  BigInt out;
  if (a.sign_ == b.sign_) {
    out.mag_ = BigInt::add_mag(a.mag_, b.mag_);
    out.sign_ = a.sign_;
  } else {
    int c = BigInt::cmp_mag(a.mag_, b.mag_);
    if (c == 0) return BigInt{};
    if (c > 0) {
      out.mag_ = BigInt::sub_mag(a.mag_, b.mag_);
      out.sign_ = a.sign_;
    } else {
      out.mag_ = BigInt::sub_mag(b.mag_, a.mag_);
      out.sign_ = b.sign_;
    }
  }
  out.trim();
  return out;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
  BigInt out;
  if (a.sign_ == 0 || b.sign_ == 0) return out;
  out.mag_ = BigInt::mul_mag(a.mag_, b.mag_);
  out.sign_ = a.sign_ * b.sign_;
  out.trim();
  return out;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  std::vector<uint32_t> qm, rm;
  divmod_mag(a.mag_, b.mag_, qm, rm);
  q = BigInt{};
  r = BigInt{};
  q.mag_ = std::move(qm);
  r.mag_ = std::move(rm);
  q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
  r.sign_ = r.mag_.empty() ? 0 : a.sign_;
}

BigInt operator/(const BigInt& a, const BigInt& b) {
  BigInt q, r;
  BigInt::divmod(a, b, q, r);
  return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
  BigInt q, r;
  BigInt::divmod(a, b, q, r);
  return r;
}

bool operator==(const BigInt& a, const BigInt& b) {
  return a.sign_ == b.sign_ && a.mag_ == b.mag_;
}

std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
  if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
  int c = BigInt::cmp_mag(a.mag_, b.mag_) * (a.sign_ < 0 ? -1 : 1);
  return c <=> 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a.sign_ = a.mag_.empty() ? 0 : 1;
  b.sign_ = b.mag_.empty() ? 0 : 1;
  while (!b.is_zero()) {
    BigInt r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

BigInt BigInt::lcm(const BigInt& a, const BigInt& b) {
  if (a.is_zero() || b.is_zero()) return BigInt{};
  return (a.abs() / gcd(a, b)) * b.abs();
}

BigInt BigInt::shifted_left(unsigned bits) const {
  if (sign_ == 0 || bits == 0) return *this;
  BigInt out;
  out.sign_ = sign_;
  const unsigned limbs = bits / 32, rem = bits % 32;
  out.mag_.assign(mag_.size() + limbs + 1, 0);
  for (size_t i = 0; i < mag_.size(); ++i) {
    uint64_t x = static_cast<uint64_t>(mag_[i]) << rem;
    out.mag_[i + limbs] |= static_cast<uint32_t>(x & 0xffffffffu);
    out.mag_[i + limbs + 1] |= static_cast<uint32_t>(x >> 32);
  }
  out.trim();
  return out;
}

size_t BigInt::bit_length() const {
  if (mag_.empty()) return 0;
  return 32 * (mag_.size() - 1) + (32 - std::countl_zero(mag_.back()));
}

BigInt BigInt::pow2(unsigned bits) { return BigInt{1}.shifted_left(bits); }

BigInt BigInt::factorial(unsigned n) {
  BigInt out{1};
  for (unsigned k = 2; k <= n; ++k) out *= BigInt{static_cast<long long>(k)};
  return out;
}

BigInt BigInt::from_string(std::string_view s) {
  if (s.empty()) throw ParseError("BigInt: empty string");
  bool neg = false;
  size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) throw ParseError("BigInt: no digits in '" + std::string(s) + "'");
  BigInt out;
  const BigInt chunk_base{1000000000};
  while (pos < s.size()) {
    size_t take = std::min<size_t>(9, s.size() - pos);
    long long v = 0;
    for (size_t i = 0; i < take; ++i) {
      char c = s[pos + i];
      if (c < '0' || c > '9') throw ParseError("BigInt: bad digit in '" + std::string(s) + "'");
      v = v * 10 + (c - '0');
    }
    BigInt scale{1};
    for (size_t i = 0; i < take; ++i) scale *= BigInt{10};
    out = out * (take == 9 ? chunk_base : scale) + BigInt{v};
    pos += take;
  }
  if (neg) out.sign_ = -out.sign_;
  return out;
}

std::string BigInt::to_string() const {
  if (sign_ == 0) return "0";
  std::vector<uint32_t> m = mag_;
  std::string digits;
  const std::vector<uint32_t> d{1000000000u};
  while (!m.empty()) {
    std::vector<uint32_t> q, r;
    divmod_mag(m, d, q, r);
    uint32_t chunk = r.empty() ? 0 : r[0];
    m = std::move(q);
    char buf[10];
    for (int i = 0; i < 9; ++i) {
      buf[i] = static_cast<char>('0' + chunk % 10);
      chunk /= 10;
    }
    digits.append(buf, 9);
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  if (sign_ < 0) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

double BigInt::to_double() const {
  if (sign_ == 0) return 0.0;
  const size_t n = mag_.size();
  const size_t take = std::min<size_t>(n, 3);
  double v = 0.0;
  for (size_t i = 0; i < take; ++i) v = v * 4294967296.0 + mag_[n - 1 - i];
  return sign_ * std::ldexp(v, static_cast<int>(32 * (n - take)));
}

}  // namespace mapode
