#include "effconv/exact_reals.hpp"

#include <mutex>

#include "effconv/error.hpp"

namespace effconv {

struct CauchyReal::Impl {
  explicit Impl(Stream<Rational> t) : terms(std::move(t)) {}
  Stream<Rational> terms;
  std::mutex mu;
  std::size_t validated = 0;  // gaps |q_i - q_{i+1}| checked for all i < validated
};

CauchyReal::CauchyReal(Stream<Rational> terms) : impl_(std::make_shared<Impl>(std::move(terms))) {}

CauchyReal CauchyReal::constant(const Rational& q) { return CauchyReal(Stream<Rational>::constant(q)); }

CauchyReal CauchyReal::from_terms(std::function<Rational(std::size_t)> term) {
  return CauchyReal(Stream<Rational>::from_index(std::move(term)));
}

Rational CauchyReal::approx(std::size_t n) const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  if (impl_->validated <= n) {
    const auto qs = impl_->terms.prefix(n + 2);
    for (std::size_t i = impl_->validated; i <= n; ++i) {
      if (abs(qs[i] - qs[i + 1]) >= Rational::pow2(-static_cast<long>(i))) {
        throw Error(ErrorKind::NameViolation,
                    "|q_" + std::to_string(i) + " - q_" + std::to_string(i + 1) + "| >= 2^-" +
                        std::to_string(i) + " at n = " + std::to_string(i));
      }
    }
    impl_->validated = n + 1;
    return qs[n];
  }
  return impl_->terms.at(n);
}

Rational approx(const CauchyReal& x, std::size_t n) { return x.approx(n); }

Rational magnitude_bound(const CauchyReal& x) { return abs(x.approx(0)) + Rational(2); }

namespace {

// Smallest k with 2^k >= b, for b > 0.
long log2_ceil(const Rational& b) {
  long k = 0;
  while (Rational::pow2(k) < b) ++k;
  return k;
}

}  // namespace

CauchyReal cauchy_arith(ArithOp op, const CauchyReal& x, const CauchyReal& y) {
  switch (op) {
    case ArithOp::Add:
      return CauchyReal::from_terms([x, y](std::size_t n) { return x.approx(n + 2) + y.approx(n + 2); });
    case ArithOp::Sub:
      return CauchyReal::from_terms([x, y](std::size_t n) { return x.approx(n + 2) - y.approx(n + 2); });
    case ArithOp::Mul: {
      // Every approximant of a name lies within 2 of q_0, so 2^k bounds both
      // factors and the product gap is below 2^k * 2 * 2^-(n+k+2).
      const long k = log2_ceil(max(magnitude_bound(x), magnitude_bound(y)));
      const auto shift = static_cast<std::size_t>(k + 2);
      return CauchyReal::from_terms(
          [x, y, shift](std::size_t n) { return x.approx(n + shift) * y.approx(n + shift); });
    }
    case ArithOp::Min:
      return CauchyReal::from_terms([x, y](std::size_t n) { return min(x.approx(n), y.approx(n)); });
    case ArithOp::Max:
      return CauchyReal::from_terms([x, y](std::size_t n) { return max(x.approx(n), y.approx(n)); });
    case ArithOp::Abs:
      return CauchyReal::from_terms([x](std::size_t n) { return abs(x.approx(n)); });
  }
  throw Error(ErrorKind::Precondition, "unknown arithmetic op");
}

CauchyReal operator+(const CauchyReal& x, const CauchyReal& y) { return cauchy_arith(ArithOp::Add, x, y); }
CauchyReal operator-(const CauchyReal& x, const CauchyReal& y) { return cauchy_arith(ArithOp::Sub, x, y); }
CauchyReal operator*(const CauchyReal& x, const CauchyReal& y) { return cauchy_arith(ArithOp::Mul, x, y); }
CauchyReal min(const CauchyReal& x, const CauchyReal& y) { return cauchy_arith(ArithOp::Min, x, y); }
CauchyReal max(const CauchyReal& x, const CauchyReal& y) { return cauchy_arith(ArithOp::Max, x, y); }
CauchyReal abs(const CauchyReal& x) { return cauchy_arith(ArithOp::Abs, x, x); }
CauchyReal negate(const CauchyReal& x) {
  return CauchyReal::from_terms([x](std::size_t n) { return -x.approx(n); });
}

Apartness compare_apart(const CauchyReal& x, const CauchyReal& y, Fuel fuel) {
  for (std::size_t n = 0; n < fuel.budget; ++n) {
    const Rational d = x.approx(n) - y.approx(n);
    const Rational err = Rational::pow2(2 - static_cast<long>(n));
    if (d > err) return Apartness::Greater;
    if (d < -err) return Apartness::Less;
  }
  return Apartness::Undetermined;
}

namespace {

Rational monotone_extreme(const Stream<Rational>& s, Fuel fuel, bool increasing) {
  const auto qs = s.prefix(fuel.budget + 1);
  for (std::size_t i = 1; i < qs.size(); ++i) {
    if (increasing ? qs[i] < qs[i - 1] : qs[i] > qs[i - 1]) {
      throw Error(ErrorKind::MonotonicityViolation,
                  "bound stream " + std::string(increasing ? "decreases" : "increases") + " at index " +
                      std::to_string(i));
    }
  }
  return qs.back();
}

}  // namespace

LowerReal LowerReal::constant(const Rational& q) { return LowerReal(Stream<Rational>::constant(q)); }
LowerReal LowerReal::from_terms(std::function<Rational(std::size_t)> term) {
  return LowerReal(Stream<Rational>::from_index(std::move(term)));
}
Rational LowerReal::approx(Fuel fuel) const { return monotone_extreme(bounds_, fuel, true); }

UpperReal UpperReal::constant(const Rational& q) { return UpperReal(Stream<Rational>::constant(q)); }
UpperReal UpperReal::from_terms(std::function<Rational(std::size_t)> term) {
  return UpperReal(Stream<Rational>::from_index(std::move(term)));
}
Rational UpperReal::approx(Fuel fuel) const { return monotone_extreme(bounds_, fuel, false); }

Rational lower_real_approx(const LowerReal& x, Fuel fuel) { return x.approx(fuel); }
Rational upper_real_approx(const UpperReal& x, Fuel fuel) { return x.approx(fuel); }

}  // namespace effconv
