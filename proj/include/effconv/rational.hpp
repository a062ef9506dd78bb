#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace effconv {

using BigInt = mpz_class;

/// Exact rational in canonical form (denominator > 0, gcd(|num|, den) = 1).
class Rational {
 public:
  Rational() = default;
  Rational(long v) : v_(v) {}  // NOLINT: implicit by design of numeric literals
  Rational(int v) : v_(static_cast<long>(v)) {}
  Rational(const BigInt& v) : v_(v) {}
  Rational(const BigInt& num, const BigInt& den);
  Rational(long num, long den) : Rational(BigInt(num), BigInt(den)) {}

  /// Parses `p/q` or `p`. Throws Error(Parse) unless already in reduced form.
  static Rational parse(std::string_view text);

  /// 2^k for any integer k.
  static Rational pow2(long k);

  BigInt num() const { return v_.get_num(); }
  BigInt den() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  BigInt floor() const;
  BigInt ceil() const;

  /// `p/q` in lowest terms; integers render as `p/1`.
  std::string str() const;

  /// Decimal rendering truncated toward zero after `digits` fractional digits.
  std::string decimal(unsigned digits = 20) const;

  double to_double() const { return v_.get_d(); }

  const mpq_class& raw() const { return v_; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { Rational r; r.v_ = -v_; return r; }

  // Direct C calls: the gmpxx operators copy both operands here.
  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

Rational abs(const Rational& x);
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational midpoint(const Rational& a, const Rational& b) { return (a + b) / Rational(2); }

/// Largest power of two <= x, for x > 0.
Rational pow2_at_most(const Rational& x);
/// Smallest k >= 0 with 2^k >= x.
long ceil_log2(const Rational& x);

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace effconv
