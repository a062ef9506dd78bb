#include <doctest.h>

#include <random>
#include <sstream>

#include "effconv/error.hpp"
#include "effconv/families.hpp"
#include "effconv/text_format.hpp"
#include "oracles.hpp"

using namespace effconv;

namespace {

std::string parse_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    return e.what();
  }
  FAIL("no error raised");
  return {};
}

bool same_atoms(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.atoms().size() != b.atoms().size()) return false;
  for (std::size_t i = 0; i < a.atoms().size(); ++i) {
    if (a.atoms()[i].location != b.atoms()[i].location || a.atoms()[i].weight != b.atoms()[i].weight) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("text_format") {

TEST_CASE("measure files") {
  const MeasureFile f = parse_measure("discrete\n# two atoms\natom 0 1/2\n\natom 1/1 1/2\ntailbound 0\n");
  const auto* d = dynamic_cast<const DiscreteMeasure*>(f.measure.get());
  REQUIRE(d);
  CHECK(d->atoms().size() == 2);
  REQUIRE(f.tailbound);
  CHECK(f.tailbound->is_zero());
  CHECK(write_measure(*f.measure, f.tailbound) == "discrete\natom 0/1 1/2\natom 1/1 1/2\ntailbound 0/1\n");
  const MeasureFile p = parse_measure("polydensity\n0 1\n1 1\n");
  CHECK(p.measure->mass(IntervalSet::whole_line()) == Rational(1));
  CHECK(write_measure(*p.measure) == "polydensity\n0/1 1/1\n1/1 1/1\n");

  CHECK(parse_error([] { parse_measure("discrete\natom 0 1\nblob 2\n"); }).find("line 3") != std::string::npos);
  CHECK(parse_error([] { parse_measure("discrete\natom 0 2/4\n"); }).find("line 2") != std::string::npos);
  CHECK(parse_error([] { parse_measure("discrete\natom 0 -1\n"); }).find("line 2") != std::string::npos);
  CHECK(parse_error([] { parse_measure("discrete\natom 0\n"); }).find("line 2") != std::string::npos);
  CHECK(parse_error([] { parse_measure("histogram\n"); }).find("line 1") != std::string::npos);
  CHECK(parse_error([] { parse_measure(""); }).find("line 1") != std::string::npos);
  CHECK(parse_error([] { parse_measure("polydensity\n0 1\n0 2\n"); }).find("line 3") != std::string::npos);
  CHECK(parse_error([] { parse_measure("polydensity\n0 -1\n"); }).find("line 2") != std::string::npos);
}

TEST_CASE("builtin families round-trip through the text form") {
  for (const char* name : {"deltashrink", "deltan", "mixture", "shifted", "specker"}) {
    const Family f = builtin_family(name);
    for (std::size_t n = 0; n < 6; ++n) {
      const auto m = std::dynamic_pointer_cast<const DiscreteMeasure>(f.seq(n));
      REQUIRE(m);
      const MeasureFile back = parse_measure(write_measure(*m));
      CHECK(same_atoms(*m, dynamic_cast<const DiscreteMeasure&>(*back.measure)));
    }
  }
  std::mt19937 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const DiscreteMeasure m(oracle::random_atoms(rng));
    CHECK(same_atoms(m, dynamic_cast<const DiscreteMeasure&>(*parse_measure(write_measure(m)).measure)));
  }
}

TEST_CASE("polygonal function files") {
  std::mt19937 rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const PolyFunc f = oracle::random_supported_poly(rng);
    CHECK(parse_polyfunc(write_polyfunc(f)) == f);
  }
  const PolyFunc c = PolyFunc::constant(Rational(3, 2));
  CHECK(parse_polyfunc(write_polyfunc(c)) == c);
  CHECK(parse_error([] { parse_polyfunc("polyfunc zero-outside\n0 1\n1 0\n"); }).find("zero-outside") != std::string::npos);
  CHECK(parse_error([] { parse_polyfunc("polyfunc wavy\n0 0\n"); }).find("line 1") != std::string::npos);
}

TEST_CASE("certificate tables") {
  const std::map<std::size_t, std::size_t> m{{0, 3}, {1, 4}, {7, 10}};
  CHECK(parse_modulus(write_modulus(m)) == m);
  const std::map<Rational, std::size_t> w{{Rational(3, 2), 0}, {Rational(5, 4), 2}};
  CHECK(parse_witness(write_witness(w)) == w);
  CHECK(parse_error([] { parse_modulus("modulus\n1 2\n1 3\n"); }).find("line 3") != std::string::npos);
  CHECK(parse_error([] { parse_modulus("modulus\n1 x\n"); }).find("line 2") != std::string::npos);
}

TEST_CASE("enumeration files") {
  CHECK(parse_enumeration("enumeration\n1\n0\n2\n") == std::vector<std::size_t>{1, 0, 2});
  try {
    parse_enumeration("enumeration\n1\n0\n1\n");
    FAIL("expected a duplicate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DuplicateEnumeration);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("index lists and reports") {
  CHECK(parse_index_list("1..4") == std::vector<std::size_t>{1, 2, 3, 4});
  CHECK(parse_index_list("2,5") == std::vector<std::size_t>{2, 5});
  CHECK_THROWS_AS(parse_index_list("4..1"), Error);
  CHECK_THROWS_AS(parse_index_list("a"), Error);

  const Verdict v = check_modulus([](std::size_t n) { return Rational::pow2(-static_cast<long>(n)); }, Rational(0),
                                  [](std::size_t N) { return N; }, {0, 1}, Fuel{1});
  std::istringstream csv(write_report_csv(v));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "N,index,checked_n,quantity,bound,pass");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    // Recompute pass/fail from quantity and bound.
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    REQUIRE(cols.size() == 6);
    const bool pass = Rational::parse(cols[3]) < Rational::parse(cols[4]);
    CHECK(cols[5] == (pass ? "pass" : "fail"));
    ++rows;
  }
  CHECK(rows == v.rows.size());
}

}
