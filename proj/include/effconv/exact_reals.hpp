#pragma once

#include <cstddef>
#include <functional>
#include <memory>

#include "effconv/rational.hpp"
#include "effconv/stream.hpp"

namespace effconv {

/// Budget for a semi-decision procedure. One unit is one refinement round;
/// a procedure that runs out of rounds answers "undetermined" instead of
/// diverging.
struct Fuel {
  std::size_t budget = 0;
};

/// A real number given by a Cauchy name: a rational stream q_0, q_1, ... with
/// |q_n - q_{n+1}| < 2^-n, hence |q_n - x| <= 2^(-n+1).
///
/// The gap condition is checked lazily as terms are pulled; the first
/// offending index raises Error(NameViolation).
class CauchyReal {
 public:
  explicit CauchyReal(Stream<Rational> terms);

  static CauchyReal constant(const Rational& q);
  static CauchyReal from_terms(std::function<Rational(std::size_t)> term);

  /// q_n, after validating the gaps up to and including |q_n - q_{n+1}|.
  Rational approx(std::size_t n) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Same as x.approx(n); |result - x| <= 2^(-n+1).
Rational approx(const CauchyReal& x, std::size_t n);

enum class ArithOp { Add, Sub, Mul, Min, Max, Abs };

/// Arithmetic on names. For Abs the second argument is ignored.
CauchyReal cauchy_arith(ArithOp op, const CauchyReal& x, const CauchyReal& y);

CauchyReal operator+(const CauchyReal& x, const CauchyReal& y);
CauchyReal operator-(const CauchyReal& x, const CauchyReal& y);
CauchyReal operator*(const CauchyReal& x, const CauchyReal& y);
CauchyReal negate(const CauchyReal& x);
CauchyReal min(const CauchyReal& x, const CauchyReal& y);
CauchyReal max(const CauchyReal& x, const CauchyReal& y);
CauchyReal abs(const CauchyReal& x);

enum class Apartness { Less, Greater, Undetermined };

/// Tries precisions 0 .. fuel-1; answers Less/Greater once the approximants
/// separate by more than their combined error.
Apartness compare_apart(const CauchyReal& x, const CauchyReal& y, Fuel fuel);

/// A left-c.e. real: a nondecreasing stream of rational lower bounds whose
/// supremum is the value.
class LowerReal {
 public:
  explicit LowerReal(Stream<Rational> bounds) : bounds_(std::move(bounds)) {}

  static LowerReal constant(const Rational& q);
  static LowerReal from_terms(std::function<Rational(std::size_t)> term);

  /// Largest bound among terms 0..fuel. Raises Error(MonotonicityViolation)
  /// if the pulled prefix ever decreases.
  Rational approx(Fuel fuel) const;

  const Stream<Rational>& bounds() const { return bounds_; }

 private:
  Stream<Rational> bounds_;
};

/// A right-c.e. real: a nonincreasing stream of rational upper bounds.
class UpperReal {
 public:
  explicit UpperReal(Stream<Rational> bounds) : bounds_(std::move(bounds)) {}

  static UpperReal constant(const Rational& q);
  static UpperReal from_terms(std::function<Rational(std::size_t)> term);

  Rational approx(Fuel fuel) const;

  const Stream<Rational>& bounds() const { return bounds_; }

 private:
  Stream<Rational> bounds_;
};

Rational lower_real_approx(const LowerReal& x, Fuel fuel);
Rational upper_real_approx(const UpperReal& x, Fuel fuel);

/// Rational B with |x| <= B, read off the first term of the name.
Rational magnitude_bound(const CauchyReal& x);

}  // namespace effconv
