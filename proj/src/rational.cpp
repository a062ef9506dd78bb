#include "effconv/rational.hpp"

#include <ostream>

#include "effconv/error.hpp"

namespace effconv {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NameViolation: return "name violation";
    case ErrorKind::MonotonicityViolation: return "monotonicity violation";
    case ErrorKind::MalformedInterval: return "malformed interval";
    case ErrorKind::EmptyCompact: return "empty compact";
    case ErrorKind::InsufficientNameProgress: return "insufficient name progress";
    case ErrorKind::UnsupportedMeasure: return "unsupported measure class";
    case ErrorKind::SearchExhausted: return "search exhausted";
    case ErrorKind::DivergenceDetected: return "divergence detected";
    case ErrorKind::DuplicateEnumeration: return "duplicate enumeration";
    case ErrorKind::CoverSearchExhausted: return "cover search exhausted";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::Parse: return "parse error";
  }
  return "error";
}

Rational::Rational(const BigInt& num, const BigInt& den) : v_(num, den) {
  if (den == 0) throw Error(ErrorKind::Precondition, "zero denominator");
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorKind::Precondition, "division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  const std::string s(text);
  const auto slash = s.find('/');
  auto parse_int = [&](const std::string& part) {
    if (part.empty()) throw Error(ErrorKind::Parse, "bad rational '" + s + "'");
    std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (start == part.size()) throw Error(ErrorKind::Parse, "bad rational '" + s + "'");
    for (std::size_t i = start; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') throw Error(ErrorKind::Parse, "bad rational '" + s + "'");
    }
    return BigInt(part[0] == '+' ? part.substr(1) : part, 10);
  };
  if (slash == std::string::npos) return Rational(parse_int(s));
  const BigInt num = parse_int(s.substr(0, slash));
  const BigInt den = parse_int(s.substr(slash + 1));
  if (den <= 0) throw Error(ErrorKind::Parse, "non-positive denominator in '" + s + "'");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (g != 1) throw Error(ErrorKind::Parse, "fraction not reduced: '" + s + "'");
  return Rational(num, den);
}

Rational Rational::pow2(long k) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  return k >= 0 ? Rational(p) : Rational(BigInt(1), p);
}

BigInt Rational::floor() const {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return r;
}

BigInt Rational::ceil() const {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return r;
}

std::string Rational::str() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::decimal(unsigned digits) const {
  BigInt num = abs(v_.get_num());
  const BigInt den = v_.get_den();
  BigInt whole, rem;
  mpz_tdiv_qr(whole.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  std::string out = (sign() < 0 ? "-" : "") + whole.get_str();
  if (digits == 0) return out;
  out += '.';
  for (unsigned i = 0; i < digits; ++i) {
    rem *= 10;
    BigInt d;
    mpz_tdiv_qr(d.get_mpz_t(), rem.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t());
    out += d.get_str();
  }
  return out;
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational pow2_at_most(const Rational& x) {
  if (x.sign() <= 0) throw Error(ErrorKind::Precondition, "pow2_at_most needs x > 0");
  long k = static_cast<long>(mpz_sizeinbase(x.num().get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(x.den().get_mpz_t(), 2));
  while (Rational::pow2(k) > x) --k;
  while (Rational::pow2(k + 1) <= x) ++k;
  return Rational::pow2(k);
}

long ceil_log2(const Rational& x) {
  long k = 0;
  while (Rational::pow2(k) < x) ++k;
  return k;
}

}  // namespace effconv
