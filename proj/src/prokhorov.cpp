#include "effconv/prokhorov.hpp"

#include <algorithm>

#include "effconv/error.hpp"

namespace effconv {

namespace {

// μ(ℝ) minus the max flow from μ's atoms into ν's atoms along pairs with
// |x - y| < eps (strict) or <= eps. Atoms are sorted, so every window of
// admissible partners slides right and filling the leftmost free capacity
// first is optimal.
Rational deficiency(const std::vector<Atom>& from, const std::vector<Atom>& to, const Rational& eps, bool strict) {
  auto close = [&](const Rational& d) { return strict ? d < eps : d <= eps; };
  std::vector<Rational> cap;
  cap.reserve(to.size());
  for (const auto& a : to) cap.push_back(a.weight);
  Rational unmatched(0);
  std::size_t lo = 0;
  for (const auto& a : from) {
    while (lo < to.size() && to[lo].location < a.location && !close(a.location - to[lo].location)) ++lo;
    Rational need = a.weight;
    for (std::size_t j = lo; j < to.size() && need.sign() > 0; ++j) {
      if (!close(abs(to[j].location - a.location))) {
        if (to[j].location > a.location) break;
        continue;
      }
      const Rational take = min(need, cap[j]);
      need -= take;
      cap[j] -= take;
    }
    unmatched += need;
  }
  return unmatched;
}

Rational two_sided(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Rational& eps, bool strict) {
  return max(deficiency(mu.atoms(), nu.atoms(), eps, strict), deficiency(nu.atoms(), mu.atoms(), eps, strict));
}

void require_finite(const DiscreteMeasure& m) {
  if (m.is_lazy()) throw Error(ErrorKind::UnsupportedMeasure, "needs a finite atom list");
}

}  // namespace

bool prokhorov_valid_at(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Rational& eps) {
  require_finite(mu);
  require_finite(nu);
  if (eps.sign() <= 0) return false;
  return two_sided(mu, nu, eps, true) <= eps;
}

Rational prokhorov_discrete(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_finite(mu);
  require_finite(nu);
  std::vector<Rational> e{Rational(0)};
  for (const auto& a : mu.atoms()) {
    for (const auto& b : nu.atoms()) e.push_back(abs(a.location - b.location));
  }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  // For eps in (e_k, e_{k+1}] the admissible pairs are those at distance
  // <= e_k, so the deficiency D_k is constant there; the first k with
  // D_k <= e_{k+1} gives ρ = max(e_k, D_k). D_k falls and e_k rises, so the
  // predicate is monotone in k.
  auto ok = [&](std::size_t k) { return k + 1 >= e.size() || two_sided(mu, nu, e[k], false) <= e[k + 1]; };
  std::size_t lo = 0, hi = e.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) hi = mid; else lo = mid + 1;
  }
  return max(e[lo], two_sided(mu, nu, e[lo], false));
}

namespace {

DiscreteMeasure discretize(const Measure& m, const Rational& h) {
  if (const auto* d = dynamic_cast<const DiscreteMeasure*>(&m)) {
    require_finite(*d);
    return *d;
  }
  if (const auto* p = dynamic_cast<const PolyDensityMeasure*>(&m)) {
    const auto& vs = p->density().vertices();
    std::vector<Atom> atoms;
    for (Rational x = vs.front().x; x < vs.back().x; x += h) {
      const Rational r = min(x + h, vs.back().x);
      const Rational w = p->mass(IntervalSet::closed(x, r));
      if (w.sign() > 0) atoms.push_back(Atom{midpoint(x, r), w});
    }
    return DiscreteMeasure(std::move(atoms));
  }
  throw Error(ErrorKind::UnsupportedMeasure, "Prokhorov bounds need discrete or polygonal-density measures");
}

bool is_discrete(const Measure& m) { return dynamic_cast<const DiscreteMeasure*>(&m) != nullptr; }

}  // namespace

std::pair<Rational, Rational> prokhorov_bounds(const Measure& mu, const Measure& nu, std::size_t n) {
  const Rational h = Rational::pow2(-static_cast<long>(n) - 1);
  const Rational rho = prokhorov_discrete(discretize(mu, h), discretize(nu, h));
  const Rational slack = (is_discrete(mu) ? Rational(0) : h / Rational(2)) + (is_discrete(nu) ? Rational(0) : h / Rational(2));
  return {max(Rational(0), rho - slack), rho + slack};
}

AlmostDecidableModulus exact_mass_modulus(const MeasureSeq& seq, const MeasurePtr& limit, const SearchParams& params) {
  return [seq, limit, params](const IntervalSet& a) -> Modulus {
    return [seq, limit, params, a](std::size_t N) {
      return search_modulus([&](std::size_t n) { return seq(n)->mass(a); }, limit->mass(a), Rational(0), N, params);
    };
  };
}

std::size_t eps_from_weak(const MeasureSeq& seq, const MeasurePtr& limit, const AlmostDecidableModulus& ad_modulus,
                          std::size_t N, std::size_t max_balls) {
  (void)seq;  // the sequence enters only through ad_modulus
  const long n = static_cast<long>(N);
  const Rational s = Rational::pow2(-(n + 3));
  const Stream<AlmostDecidableBall> cover = almost_decidable_cover(limit, s);
  const Rational target = limit->mass(IntervalSet::whole_line()) - Rational::pow2(-(n + 2));
  std::vector<IntervalSet> balls;
  IntervalSet covered = IntervalSet::empty();
  while (covered.is_empty() || limit->mass(covered) < target) {
    if (balls.size() >= max_balls)
      throw Error(ErrorKind::CoverSearchExhausted, std::to_string(max_balls) + " balls of radius < 2^-" +
                                                       std::to_string(N + 3) + " do not carry enough mass");
    const AlmostDecidableBall b = cover.at(balls.size());
    balls.push_back(IntervalSet::open(b.center - b.radius, b.center + b.radius));
    covered = covered.unite(balls.back());
    if (target.sign() <= 0) break;
  }
  std::size_t eps = 0;
  const std::size_t subsets = std::size_t{1} << balls.size();
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    IntervalSet a = IntervalSet::empty();
    for (std::size_t j = 0; j < balls.size(); ++j) {
      if (mask >> j & 1) a = a.unite(balls[j]);
    }
    eps = std::max(eps, ad_modulus(a)(N + 2));
  }
  return eps;
}

std::optional<std::size_t> witness_from_eps(const MeasurePtr& limit, const Modulus& eps, const PiSet& c,
                                            const Rational& r, std::size_t max_precision) {
  if (!c.geometry) throw Error(ErrorKind::Precondition, "witness_from_eps needs the exact closed set");
  const Rational mu_c = limit->mass(*c.geometry);
  if (r <= mu_c) return std::nullopt;
  const Rational gap = r - mu_c;
  std::size_t m0 = 0;
  while (!(gap > Rational::pow2(-static_cast<long>(m0)))) ++m0;
  const Rational slack = Rational::pow2(-static_cast<long>(m0));
  for (std::size_t n0 = 0; n0 <= max_precision; ++n0) {
    const PiSet nb = closed_neighborhood(c, Rational::pow2(-static_cast<long>(n0)));
    if (r - limit->mass(*nb.geometry) > slack) return eps(m0 + n0 + 1);
  }
  throw Error(ErrorKind::SearchExhausted, "no neighborhood of C is light enough for r = " + r.str());
}

}  // namespace effconv
