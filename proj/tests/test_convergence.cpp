#include <doctest.h>

#include <map>
#include <random>

#include "effconv/convergence.hpp"
#include "effconv/error.hpp"
#include "effconv/families.hpp"
#include "oracles.hpp"

using namespace effconv;

namespace {

Rational two_to(long k) { return Rational::pow2(k); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Precondition;
}

PolyFunc hat() {
  return PolyFunc({{Rational(-1), Rational(0)}, {Rational(0), Rational(1)}, {Rational(1), Rational(0)}},
                  Extension::ZeroOutside);
}

}  // namespace

TEST_SUITE("convergence") {

TEST_CASE("modulus checks") {
  auto seq = [](std::size_t n) { return two_to(-static_cast<long>(n)); };
  const Verdict good = check_modulus(seq, Rational(0), [](std::size_t N) { return N + 1; }, {0, 1, 2, 3}, Fuel{5});
  CHECK(good.pass);
  CHECK(good.rows.size() == 24);
  const Verdict bad = check_modulus(seq, Rational(0), [](std::size_t N) { return N; }, {0, 1, 2}, Fuel{2});
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.first_failure());
  CHECK(bad.first_failure()->key == "0");
  CHECK(bad.first_failure()->checked_n == 0);
  for (const auto& r : bad.rows) CHECK(r.pass == (r.quantity < r.bound));

  auto cseq = [](std::size_t n) { return CauchyReal::constant(two_to(-static_cast<long>(n))); };
  CHECK(check_modulus(cseq, CauchyReal::constant(Rational(0)), [](std::size_t N) { return N + 1; }, {0, 4, 8}, Fuel{3})
            .pass);
  CHECK_FALSE(
      check_modulus(cseq, CauchyReal::constant(Rational(0)), [](std::size_t N) { return N; }, {0, 4}, Fuel{3}).pass);
}

TEST_CASE("windowed modulus search") {
  const SearchParams small{8, 4};
  auto conv = [](std::size_t n) { return two_to(-static_cast<long>(n)); };
  CHECK(search_modulus(conv, Rational(0), Rational(0), 3, small) == 4);
  CHECK(kind_of([&] { search_modulus([](std::size_t) { return Rational(1); }, Rational(0), Rational(0), 2, small); }) ==
        ErrorKind::DivergenceDetected);
  auto flicker = [](std::size_t n) { return n % 2 ? Rational(1) : Rational(0); };
  CHECK(kind_of([&] { search_modulus(flicker, Rational(0), Rational(0), 2, small); }) == ErrorKind::SearchExhausted);
}

TEST_CASE("search-based moduli on the corpus") {
  const Family f = delta_shrink_family();
  const PolyFunc h = hat();
  auto exact_at = [&](std::size_t n) { return integrate_poly(h, *f.seq(n)); };
  const Rational lim = integrate_poly(h, *f.limit);
  CHECK(check_modulus(exact_at, lim, weak_modulus(f.seq, f.limit, BoundedFunc{co_name_of_poly(h), Rational(1)}),
                      {0, 1, 2, 3}, Fuel{6})
            .pass);
  CHECK(check_modulus(exact_at, lim, vague_modulus(f.seq, f.limit, supported_from_poly(h)), {0, 1, 2, 3}, Fuel{6}).pass);
  CHECK(check_modulus(exact_at, lim, exact_poly_oracle(f.seq, f.limit)(h), {0, 2, 4, 6}, Fuel{6}).pass);
  const Family dn = delta_n_family();
  CHECK(kind_of([&] { total_mass_modulus_search(dn.seq, dn.limit)(0); }) == ErrorKind::DivergenceDetected);
}

TEST_CASE("uniformizer") {
  for (std::size_t N = 0; N < 12; ++N) {
    const auto b = uniformizer_budget(N);
    CHECK(b[0] + b[1] + b[2] == two_to(-static_cast<long>(N)));
  }
  const Family f = mixture_family();
  std::mt19937 rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    const PolyFunc p = oracle::random_supported_poly(rng);
    if (p.support().is_empty()) continue;
    const SupportedFunc sf = supported_from_poly(p);
    const UniformizeTrace tr = uniformize_vague_trace(f.seq, f.oracle, sf, 4);
    CHECK(tr.i_lo <= *p.support().min());
    CHECK(tr.i_hi >= *p.support().max());
    CHECK(tr.G == std::max(tr.n0, tr.n1));
    CHECK(oracle::sup_distance(p, tr.psi, tr.i_lo - Rational(1), tr.i_hi + Rational(1)) < tr.err);
    auto at = [&](std::size_t n) { return integrate_poly(p, *f.seq(n)); };
    const Modulus g = [&](std::size_t N) { return uniformize_vague(f.seq, f.oracle, sf, N); };
    CHECK(check_modulus(at, integrate_poly(p, *f.limit), g, {0, 2, 4}, Fuel{4}).pass);
  }
  CHECK(uniformize_vague(f.seq, f.oracle, supported_from_poly(PolyFunc::zero()), 3) == 0);
}

TEST_CASE("complement modulus") {
  const Modulus g1 = [](std::size_t N) { return 2 * N; };
  const Modulus g2 = [](std::size_t N) { return N + 5; };
  CHECK(complement_modulus(g1, g2, 3) == 9);
  CHECK(complement_modulus(g1, g2, 10) == 22);
}

TEST_CASE("tail bounds and surrogates") {
  const Family f = mixture_family();
  for (std::size_t N = 0; N < 6; ++N) {
    const TailBound tb = tail_mass_bound(f.seq, *f.total_mass_modulus, f.oracle, N);
    const Rational a(static_cast<long>(tb.a));
    for (std::size_t n = tb.n0; n < tb.n0 + 10; ++n) {
      const Rational outside = f.seq(n)->mass(IntervalSet::closed(-a, a).complement());
      CHECK(outside < two_to(-static_cast<long>(N)));
    }
  }
  const PolyFunc clamp({{Rational(-1), Rational(-1)}, {Rational(1), Rational(1)}}, Extension::ConstantExtend);
  const BoundedFunc bf{co_name_of_poly(clamp), Rational(1)};
  for (std::size_t N = 0; N < 5; ++N) {
    const Surrogate s = polygonal_surrogate(f.seq, *f.total_mass_modulus, f.oracle, bf, N);
    CHECK(s.psi.support().subset_of(IntervalSet::closed(Rational(-static_cast<long>(s.a)), Rational(static_cast<long>(s.a)))));
    for (std::size_t n = s.n1; n < s.n1 + 6; ++n)
      CHECK(abs(integrate_poly(clamp, *f.seq(n)) - integrate_poly(s.psi, *f.seq(n))) < two_to(-static_cast<long>(N)));
    CHECK(abs(integrate_poly(clamp, *f.limit) - integrate_poly(s.psi, *f.limit)) < two_to(-static_cast<long>(N)));
  }
}

TEST_CASE("vague to weak with a checked total-mass modulus") {
  const Family f = shifted_family();
  const PolyFunc one = PolyFunc::constant(Rational(1));
  const BoundedFunc bf{co_name_of_poly(one), Rational(1)};
  const CheckedWeak ok = vague_to_weak_checked(f.seq, f.limit->total_mass(), *f.total_mass_modulus, f.oracle, bf,
                                               {0, 1, 2, 3}, Fuel{5});
  REQUIRE(ok.tm_ok);
  auto at = [&](std::size_t n) { return integrate_poly(one, *f.seq(n)); };
  std::map<std::size_t, std::size_t> table;
  for (std::size_t i = 0; i < 4; ++i) table[i] = ok.moduli[i];
  CHECK(check_modulus(at, Rational(1), [&](std::size_t N) { return table.at(N); }, {0, 1, 2, 3}, Fuel{5}).pass);

  // A total-mass modulus that stops at μ_3 is caught before it is used.
  const Specker s = specker_sequence(identity_enumeration(), true);
  const CheckedWeak broken = vague_to_weak_checked(s.family.seq, s.family.limit->total_mass(), constant_modulus(3),
                                                   s.family.oracle, bf, {0, 1}, Fuel{4});
  CHECK_FALSE(broken.tm_ok);
  CHECK_FALSE(broken.tm_verdict.pass);
}

TEST_CASE("limit reconstruction") {
  const Family f = delta_shrink_family();
  const MeasurePtr lim = limit_from_vague(f.seq, f.oracle, CauchyReal::constant(Rational(1)));
  CHECK_FALSE(lim->exact());
  const LowerReal m = lim->open_mass(sigma_from_set(IntervalSet::open(Rational(-1), Rational(1))));
  const Rational v = m.approx(Fuel{12});
  CHECK(v <= Rational(1));
  CHECK(Rational(1) - v < Rational(1, 8));
  const PolyFunc h = hat();
  CHECK(abs(lim->integrate_approx(h, 8) - Rational(1)) <= two_to(-8));
}

TEST_CASE("portmanteau certificates") {
  const Family f = shifted_family();
  const IntervalSet c = IntervalSet::closed(Rational(0), Rational(1));
  // μ_n(C) = 0 for all n >= 1; μ(C) = 1.
  const Witness g = [](const Rational& r) -> std::optional<std::size_t> {
    if (r <= Rational(1)) return std::nullopt;
    return 0;
  };
  CHECK(portmanteau_check(f.seq, f.limit, PortmanteauMode::ClosedLimsup, c, g, {Rational(1, 2), Rational(3, 2)}, Fuel{5})
            .pass);
  const Witness wrong = [](const Rational&) -> std::optional<std::size_t> { return 0; };
  CHECK_FALSE(portmanteau_check(f.seq, f.limit, PortmanteauMode::ClosedLimsup, c, wrong, {Rational(1, 2)}, Fuel{5}).pass);
  // U = (1/2, 3): μ(U) = 1 and μ_n(U) = 1 for every n.
  const Witness gl = [](const Rational& r) -> std::optional<std::size_t> {
    if (r >= Rational(1)) return std::nullopt;
    return 0;
  };
  CHECK(portmanteau_check(f.seq, f.limit, PortmanteauMode::OpenLiminf, IntervalSet::open(Rational(1, 2), Rational(3)), gl,
                          {Rational(1, 2), Rational(2)}, Fuel{5})
            .pass);
  // A = (1/2, 3) is almost decidable for δ_1.
  CHECK(portmanteau_check(f.seq, f.limit, IntervalSet::open(Rational(1, 2), Rational(3)), constant_modulus(0), {0, 3},
                          Fuel{5})
            .pass);
  CHECK(kind_of([&] {
          portmanteau_check(f.seq, f.limit, IntervalSet::open(Rational(1), Rational(2)), constant_modulus(0), {0}, Fuel{1});
        }) == ErrorKind::Precondition);
}

}

TEST_SUITE("families") {

TEST_CASE("support index") {
  CHECK(support_index(hat()) == 2);
  CHECK(support_index(PolyFunc::zero()) == 1);
  CHECK(support_index(tent_function(Rational(-2), Rational(2))) == 4);
  CHECK(support_index(PolyFunc({{Rational(-5), Rational(0)}, {Rational(-4), Rational(1)}, {Rational(-3), Rational(0)}},
                               Extension::ZeroOutside)) == 0);
  CHECK_THROWS_AS(support_index(PolyFunc::constant(Rational(1))), Error);
}

TEST_CASE("Lipschitz oracles certify the shrinking deltas") {
  const Family f = delta_shrink_family();
  std::mt19937 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const PolyFunc p = oracle::random_supported_poly(rng);
    auto at = [&](std::size_t n) { return integrate_poly(p, *f.seq(n)); };
    CHECK(check_modulus(at, integrate_poly(p, *f.limit), f.oracle(p), {0, 3, 6}, Fuel{10}).pass);
  }
}

TEST_CASE("enumerations") {
  const Enumeration s = swap_pairs_enumeration();
  CHECK(s(0) == 1);
  CHECK(s(5) == 4);
  const Enumeration l = listed_enumeration({3, 0, 5});
  std::vector<std::size_t> got;
  for (std::size_t i = 0; i < 8; ++i) got.push_back(l(i));
  CHECK(got == std::vector<std::size_t>{3, 0, 5, 1, 2, 4, 6, 7});
}

TEST_CASE("Specker sequences") {
  const Specker s = specker_sequence(identity_enumeration());
  const MeasurePtr m2 = s.family.seq(2);
  CHECK(m2->mass(IntervalSet::whole_line()) == Rational(7, 8));
  CHECK(s.oracle_queries() == 3);
  CHECK(s.total_mass_lower.approx(Fuel{4}) == Rational(31, 32));
  // From a name the ceiling of an integer endpoint is only known up to one.
  CHECK(s.modulus_index(supported_from_poly(hat())) == 3);
  CHECK(s.modulus_index(supported_from_poly(tent_function(Rational(0), Rational(1, 2)))) == 3);
  const Specker dup = specker_sequence([](std::size_t i) { return i < 3 ? i : std::size_t{1}; });
  try {
    dup.family.seq(5);
    FAIL("expected a duplicate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DuplicateEnumeration);
    CHECK(std::string(e.what()).find("position 3") != std::string::npos);
  }
  CHECK(kind_of([] { builtin_family("nope"); }) == ErrorKind::Parse);
  CHECK(builtin_family("specker").limit);
}

}
