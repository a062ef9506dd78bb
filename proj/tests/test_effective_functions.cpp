#include <doctest.h>

#include <random>

#include "effconv/effective_functions.hpp"
#include "effconv/error.hpp"
#include "oracles.hpp"

using namespace effconv;

namespace {

PolyFunc hat() {
  return PolyFunc({{Rational(-1), Rational(0)}, {Rational(0), Rational(1)}, {Rational(1), Rational(0)}},
                  Extension::ZeroOutside);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Precondition;
}

}  // namespace

TEST_SUITE("effective_functions") {

TEST_CASE("polygonal functions") {
  const PolyFunc h = hat();
  CHECK(h.eval(Rational(1, 2)) == Rational(1, 2));
  CHECK(h.eval(Rational(5)) == Rational(0));
  CHECK(h.support() == IntervalSet::closed(Rational(-1), Rational(1)));
  CHECK(h.sup_abs() == Rational(1));
  CHECK(h.range_on(Rational(-2), Rational(-1, 2)) == std::pair{Rational(0), Rational(1, 2)});
  const PolyFunc clamp({{Rational(-1), Rational(-1)}, {Rational(1), Rational(1)}}, Extension::ConstantExtend);
  CHECK(clamp.eval(Rational(-7)) == Rational(-1));
  CHECK_FALSE(clamp.support().is_bounded());
  CHECK(PolyFunc::zero().support().is_empty());
  CHECK(kind_of([] { PolyFunc({}, Extension::ConstantExtend); }) == ErrorKind::Precondition);
  CHECK(kind_of([] { PolyFunc({{Rational(0), Rational(1)}, {Rational(0), Rational(2)}}, Extension::ConstantExtend); }) ==
        ErrorKind::Precondition);
  CHECK(kind_of([] { PolyFunc({{Rational(0), Rational(1)}}, Extension::ZeroOutside); }) == ErrorKind::Precondition);
}

TEST_CASE("evaluation agrees with direct interpolation (property)") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const PolyFunc f = oracle::random_supported_poly(rng);
    for (int k = 0; k < 10; ++k) {
      const Rational x = oracle::random_rational(rng, -4, 4, {1, 3, 5, 8});
      CHECK(f.eval(x) == oracle::eval(f, x));
    }
  }
}

TEST_CASE("compact-open names are sound") {
  std::mt19937 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const PolyFunc f = oracle::random_supported_poly(rng);
    const CompactOpenName name = co_name_of_poly(f);
    name.visit(0, 3000, [&](const std::optional<Box>& b) {
      if (!b) return;
      const auto [lo, hi] = f.range_on(b->i_lo, b->i_hi);
      CHECK(b->j_lo < lo);
      CHECK(hi < b->j_hi);
    });
  }
}

TEST_CASE("compact-open names certify every correct pair with slack") {
  const PolyFunc h = hat();
  const CompactOpenName name = co_name_of_poly(h);
  CHECK(name_certifies(name, Rational(-1, 2), Rational(1, 2), Rational(1, 4), Rational(9, 8), 20000));
  CHECK(name_certifies(name, Rational(2), Rational(9), Rational(-1, 16), Rational(1, 16), 20000));
  CHECK_FALSE(name_certifies(name, Rational(-1, 2), Rational(1, 2), Rational(1, 2), Rational(9, 8), 20000));
}

TEST_CASE("decoded boxes are well formed") {
  for (long z = 0; z < 300; ++z) {
    const Box b = decode_box(BigInt(z));
    CHECK(b.i_lo <= b.i_hi);
    CHECK(b.j_lo < b.j_hi);
  }
}

TEST_CASE("approximation on an interval meets the error (property)") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const PolyFunc f = oracle::random_supported_poly(rng);
    const Rational err = Rational::pow2(-std::uniform_int_distribution<long>(1, 7)(rng));
    const Rational u = oracle::random_rational(rng, -4, 0), v = oracle::random_rational(rng, 0, 4);
    const PolyFunc psi = approx_on_interval(co_name_of_poly(f), u, v, err);
    CHECK(oracle::sup_distance(f, psi, u, v) < err);
  }
  CHECK(kind_of([] { approx_on_interval(co_name_of_poly(hat()), Rational(-1), Rational(1), Rational::pow2(-20), 64); }) ==
        ErrorKind::InsufficientNameProgress);
}

TEST_CASE("polygonal approximation of compactly supported functions (property)") {
  std::mt19937 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const PolyFunc f = oracle::random_supported_poly(rng);
    if (f.support().is_empty()) continue;
    const Rational err = Rational::pow2(-std::uniform_int_distribution<long>(1, 6)(rng));
    const SupportedFunc sf = supported_from_poly(f);
    const PolyFunc psi = approx_polygonal(sf, err);
    CHECK(psi.extension() == Extension::ZeroOutside);
    const auto [p, q] = polygonal_window(sf);
    CHECK(p < *f.support().min());
    CHECK(q > *f.support().max());
    CHECK(oracle::sup_distance(f, psi, p - Rational(1), q + Rational(1)) < err);
    CHECK(approx_polygonal(sf, err) == psi);
  }
  // Empty support: ψ = 0.
  const PolyFunc psi0 = approx_polygonal(supported_from_poly(PolyFunc::zero()), Rational(1, 4));
  CHECK(psi0.support().is_empty());
  CHECK(kind_of([] { supported_from_poly(PolyFunc::constant(Rational(1))); }) == ErrorKind::Precondition);
}

TEST_CASE("tents and trapezoids") {
  const PolyFunc t = tent_function(Rational(-2), Rational(2));
  CHECK(t.support() == IntervalSet::closed(Rational(-3), Rational(3)));
  CHECK(t.eval(Rational(0)) == Rational(1));
  CHECK(t.eval(Rational(-5, 2)) == Rational(1, 2));
  const PolyFunc tr = indicator_approx(Rational(0), Rational(1), 2);
  CHECK(tr.eval(Rational(1, 8)) == Rational(1));
  CHECK(tr.eval(Rational(1, 16)) == Rational(1, 2));
  CHECK(kind_of([] { indicator_approx(Rational(1), Rational(1), 0); }) == ErrorKind::MalformedInterval);
}

}
