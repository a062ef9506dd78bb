#include "effconv/families.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "effconv/error.hpp"

namespace effconv {

namespace {

Rational lipschitz(const PolyFunc& p) {
  Rational l(0);
  const auto& vs = p.vertices();
  for (std::size_t i = 1; i < vs.size(); ++i) l = max(l, abs((vs[i].y - vs[i - 1].y) / (vs[i].x - vs[i - 1].x)));
  return l;
}

MeasurePtr dirac(const Rational& x) { return DiscreteMeasure::dirac(x); }

}  // namespace

PolyOracle lipschitz_oracle(const Rational& scale) {
  return [scale](const PolyFunc& p) -> Modulus {
    // |∫p dμ_n - ∫p dμ| <= Lip(p)·scale·2^-n < 2^-N once 2^(n-N) > Lip·scale.
    const long k = ceil_log2(lipschitz(p) * scale + Rational(1));
    return [k](std::size_t N) { return N + static_cast<std::size_t>(k) + 1; };
  };
}

std::size_t support_index(const PolyFunc& p) {
  const IntervalSet supp = p.support();
  if (supp.is_empty()) return 1;  // max of the empty support read as 0
  if (!supp.is_bounded()) throw Error(ErrorKind::Precondition, "support is unbounded");
  const BigInt top = supp.spans().back().hi->ceil() + 1;
  return top <= 0 ? 0 : static_cast<std::size_t>(top.get_ui());
}

Family delta_shrink_family() {
  return Family{"deltashrink",
                [](std::size_t n) { return dirac(Rational::pow2(-static_cast<long>(n))); },
                dirac(Rational(0)),
                lipschitz_oracle(Rational(1)),
                constant_modulus(0),
                true};
}

Family delta_n_family() {
  return Family{"deltan",
                [](std::size_t n) { return dirac(Rational(static_cast<long>(n))); },
                DiscreteMeasure::zero(),
                [](const PolyFunc& p) -> Modulus { return constant_modulus(support_index(p)); },
                std::nullopt,
                true};
}

Family mixture_family() {
  const Rational half(1, 2);
  return Family{"mixture",
                [half](std::size_t n) -> MeasurePtr {
                  return std::make_shared<DiscreteMeasure>(std::vector<Atom>{
                      {Rational(0), half}, {Rational(1) + Rational::pow2(-static_cast<long>(n)), half}});
                },
                std::make_shared<DiscreteMeasure>(std::vector<Atom>{{Rational(0), half}, {Rational(1), half}}),
                lipschitz_oracle(half),
                constant_modulus(0),
                true};
}

Family shifted_family() {
  return Family{"shifted",
                [](std::size_t n) { return dirac(Rational(1) + Rational::pow2(-static_cast<long>(n))); },
                dirac(Rational(1)),
                lipschitz_oracle(Rational(1)),
                constant_modulus(0),
                true};
}

Family constant_family(MeasurePtr mu) {
  const bool prob = mu->exact() && mu->mass(IntervalSet::whole_line()) == Rational(1);
  return Family{"constant",
                [mu](std::size_t) { return mu; },
                mu,
                [](const PolyFunc&) -> Modulus { return constant_modulus(0); },
                constant_modulus(0),
                prob};
}

Enumeration identity_enumeration() {
  return [](std::size_t i) { return i; };
}

Enumeration swap_pairs_enumeration() {
  return [](std::size_t i) { return i ^ std::size_t{1}; };
}

Enumeration listed_enumeration(std::vector<std::size_t> prefix) {
  std::vector<std::size_t> sorted = prefix;
  std::sort(sorted.begin(), sorted.end());
  return [prefix = std::move(prefix), sorted = std::move(sorted)](std::size_t i) {
    if (i < prefix.size()) return prefix[i];
    // The (i - |prefix|)-th natural missing from the prefix.
    std::size_t want = i - prefix.size();
    std::size_t x = 0;
    for (const std::size_t s : sorted) {
      if (s < x) continue;
      if (s - x > want) break;
      want -= s - x;
      x = s + 1;
    }
    return x + want;
  };
}

Specker specker_sequence(Enumeration a, bool identity_limit) {
  struct Shared {
    std::mutex mu;
    std::set<std::size_t> seen;
  };
  auto shared = std::make_shared<Shared>();
  // Reading the enumeration through a memoized stream makes the number of
  // values read observable and checks injectivity once per element.
  Stream<std::size_t> values = Stream<std::size_t>::from_index([a, shared](std::size_t i) {
    const std::size_t v = a(i);
    std::lock_guard<std::mutex> lock(shared->mu);
    if (!shared->seen.insert(v).second)
      throw Error(ErrorKind::DuplicateEnumeration, "value " + std::to_string(v) + " repeats at position " +
                                                       std::to_string(i));
    return v;
  });
  auto weight = [](std::size_t v) { return Rational::pow2(-static_cast<long>(v) - 1); };

  Specker s;
  s.family.name = "specker";
  s.family.seq = [values, weight](std::size_t n) -> MeasurePtr {
    std::vector<Atom> atoms;
    values.visit(0, n + 1, [&](const std::size_t& v) {
      atoms.push_back(Atom{Rational(static_cast<long>(atoms.size())), weight(v)});
    });
    return std::make_shared<DiscreteMeasure>(std::move(atoms));
  };
  s.family.oracle = [](const PolyFunc& p) -> Modulus { return constant_modulus(support_index(p)); };
  s.family.probability = false;
  if (identity_limit) {
    s.family.limit = DiscreteMeasure::lazy(
        [weight](std::size_t i) { return Atom{Rational(static_cast<long>(i)), weight(i)}; },
        [](std::size_t k) { return Rational::pow2(-static_cast<long>(k)); });
    s.family.total_mass_modulus = Modulus([](std::size_t N) { return N; });
  }
  s.modulus_index = [](const SupportedFunc& f) -> std::size_t {
    if (f.support.covers.at(0).empty()) return 0;
    const CauchyReal hi = compact_bounds(f.support).second;
    const Rational upper = hi.approx(4) + Rational(1, 8);
    const BigInt top = upper.ceil() + 1;
    return top <= 0 ? 0 : static_cast<std::size_t>(top.get_ui());
  };
  s.total_mass_lower = LowerReal::from_terms([values, weight](std::size_t k) {
    Rational sum(0);
    values.visit(0, k + 1, [&](const std::size_t& v) { sum += weight(v); });
    return sum;
  });
  s.oracle_queries = [values]() { return values.pulled(); };
  return s;
}

Family builtin_family(const std::string& name) {
  if (name == "deltashrink") return delta_shrink_family();
  if (name == "deltan") return delta_n_family();
  if (name == "mixture") return mixture_family();
  if (name == "shifted") return shifted_family();
  if (name == "specker") return specker_sequence(identity_enumeration(), true).family;
  throw Error(ErrorKind::Parse, "unknown sequence '" + name + "'");
}

}  // namespace effconv
