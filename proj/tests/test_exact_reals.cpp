#include <doctest.h>

#include <random>

#include "effconv/error.hpp"
#include "effconv/exact_reals.hpp"
#include "oracles.hpp"

using namespace effconv;

namespace {

// A name of r whose terms wobble by at most 2^-(n+2).
CauchyReal wobbly(const Rational& r, unsigned seed) {
  return CauchyReal::from_terms([r, seed](std::size_t n) {
    std::mt19937 rng(seed * 7919u + static_cast<unsigned>(n));
    const long q = 1L << 20;
    const Rational d(std::uniform_int_distribution<long>(-q, q)(rng), q);
    return r + d * Rational::pow2(-static_cast<long>(n) - 2);
  });
}

bool within(const Rational& a, const Rational& b, std::size_t n) {
  return abs(a - b) <= Rational::pow2(1 - static_cast<long>(n));
}

}  // namespace

TEST_SUITE("exact_reals") {

TEST_CASE("rational text form") {
  CHECK(Rational::parse("3/4").str() == "3/4");
  CHECK(Rational::parse("-5").str() == "-5/1");
  CHECK(Rational::parse("0").str() == "0/1");
  CHECK_THROWS_AS(Rational::parse("2/4"), Error);
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("x"), Error);
  CHECK(Rational(1, 3).decimal(5) == "0.33333");
  CHECK(Rational(1, 2).decimal(3) == "0.500");
}

TEST_CASE("powers of two") {
  CHECK(Rational::pow2(-3) == Rational(1, 8));
  CHECK(Rational::pow2(4) == Rational(16));
  CHECK(pow2_at_most(Rational(3, 10)) == Rational(1, 4));
  CHECK(pow2_at_most(Rational(1, 4)) == Rational(1, 4));
  CHECK(ceil_log2(Rational(1)) == 0);
  CHECK(ceil_log2(Rational(5)) == 3);
  CHECK(ceil_log2(Rational(1, 2)) == 0);
}

TEST_CASE("constant names and the gap check") {
  const CauchyReal x = CauchyReal::constant(Rational(2, 3));
  CHECK(x.approx(10) == Rational(2, 3));
  // q_n = 1 for n < 3 then 0: |q_2 - q_3| = 1 >= 2^-2.
  const CauchyReal bad = CauchyReal::from_terms([](std::size_t n) { return n < 3 ? Rational(1) : Rational(0); });
  CHECK(bad.approx(1) == Rational(1));
  try {
    bad.approx(5);
    FAIL("expected a name violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NameViolation);
    CHECK(std::string(e.what()).find("n = 2") != std::string::npos);
  }
}

TEST_CASE("arithmetic stays within the name error (property)") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Rational a = oracle::random_rational(rng, -5, 5);
    const Rational b = oracle::random_rational(rng, -5, 5);
    const CauchyReal x = wobbly(a, trial);
    const CauchyReal y = wobbly(b, trial + 1000);
    for (std::size_t n : {0, 3, 9, 17}) {
      CHECK(within((x + y).approx(n), a + b, n));
      CHECK(within((x - y).approx(n), a - b, n));
      CHECK(within((x * y).approx(n), a * b, n));
      CHECK(within(min(x, y).approx(n), min(a, b), n));
      CHECK(within(max(x, y).approx(n), max(a, b), n));
      CHECK(within(abs(x).approx(n), abs(a), n));
      CHECK(within(negate(x).approx(n), -a, n));
    }
    CHECK(abs(a) <= magnitude_bound(x));
  }
}

TEST_CASE("apartness") {
  const CauchyReal third = wobbly(Rational(1, 3), 1);
  const CauchyReal half = wobbly(Rational(1, 2), 2);
  CHECK(compare_apart(third, half, Fuel{20}) == Apartness::Less);
  CHECK(compare_apart(half, third, Fuel{20}) == Apartness::Greater);
  CHECK(compare_apart(third, wobbly(Rational(1, 3), 3), Fuel{20}) == Apartness::Undetermined);
  CHECK(compare_apart(third, half, Fuel{0}) == Apartness::Undetermined);
}

TEST_CASE("one-sided reals") {
  const LowerReal l = LowerReal::from_terms([](std::size_t k) { return Rational(1) - Rational::pow2(-static_cast<long>(k)); });
  CHECK(l.approx(Fuel{0}) == Rational(0));
  CHECK(l.approx(Fuel{3}) == Rational(7, 8));
  const UpperReal u = UpperReal::from_terms([](std::size_t k) { return Rational::pow2(-static_cast<long>(k)); });
  CHECK(u.approx(Fuel{4}) == Rational(1, 16));
  const LowerReal bad = LowerReal::from_terms([](std::size_t k) { return k == 2 ? Rational(-1) : Rational(0); });
  CHECK(bad.approx(Fuel{1}) == Rational(0));
  try {
    bad.approx(Fuel{4});
    FAIL("expected a monotonicity violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MonotonicityViolation);
  }
}

TEST_CASE("streams memoize") {
  int calls = 0;
  Stream<int> s = Stream<int>::from_index([&calls](std::size_t i) {
    ++calls;
    return static_cast<int>(i * i);
  });
  CHECK(s.at(4) == 16);
  CHECK(s.pulled() == 5);
  CHECK(s.at(2) == 4);
  CHECK(calls == 5);
}

}
