#include "effconv/measures.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "effconv/error.hpp"

namespace effconv {

Rational Measure::integrate(const PolyFunc&) const {
  throw Error(ErrorKind::UnsupportedMeasure, "no exact integrals for this measure");
}

Rational Measure::mass(const IntervalSet&) const {
  throw Error(ErrorKind::UnsupportedMeasure, "no exact masses for this measure");
}

Rational integrate_poly(const PolyFunc& p, const Measure& mu) { return mu.integrate(p); }

// ---- discrete -------------------------------------------------------------

namespace {

constexpr std::size_t kTailSearchCap = std::size_t{1} << 20;

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  for (auto& a : atoms) {
    if (a.weight.sign() <= 0) throw Error(ErrorKind::Precondition, "atom weights must be positive");
    if (!atoms_.empty() && atoms_.back().location == a.location) {
      atoms_.back().weight += a.weight;
    } else {
      atoms_.push_back(std::move(a));
    }
  }
}

std::shared_ptr<DiscreteMeasure> DiscreteMeasure::lazy(std::function<Atom(std::size_t)> atom,
                                                       std::function<Rational(std::size_t)> tail_after) {
  std::shared_ptr<DiscreteMeasure> m(new DiscreteMeasure());
  m->lazy_ = std::make_shared<Lazy>(Lazy{Stream<Atom>::from_index([atom = std::move(atom)](std::size_t i) {
                                           Atom a = atom(i);
                                           if (a.weight.sign() <= 0)
                                             throw Error(ErrorKind::Precondition, "atom weights must be positive");
                                           return a;
                                         }),
                                         std::move(tail_after)});
  return m;
}

std::shared_ptr<DiscreteMeasure> DiscreteMeasure::dirac(const Rational& x, const Rational& w) {
  return std::make_shared<DiscreteMeasure>(std::vector<Atom>{{x, w}});
}

std::shared_ptr<DiscreteMeasure> DiscreteMeasure::zero() { return std::make_shared<DiscreteMeasure>(std::vector<Atom>{}); }

namespace {

// Smallest prefix length whose tail is declared at most `bound`.
std::size_t prefix_for_tail(const std::function<Rational(std::size_t)>& tail_after, const Rational& bound) {
  for (std::size_t k = 0; k < kTailSearchCap; k = k == 0 ? 1 : 2 * k) {
    if (tail_after(k) <= bound) {
      // Refine within (k/2, k].
      std::size_t lo = k / 2, hi = k;
      while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (tail_after(mid) <= bound) hi = mid; else lo = mid + 1;
      }
      return hi;
    }
  }
  throw Error(ErrorKind::SearchExhausted, "declared tail bound does not reach " + bound.str());
}

}  // namespace

CauchyReal DiscreteMeasure::total_mass() const {
  if (!lazy_) {
    Rational sum(0);
    for (const auto& a : atoms_) sum += a.weight;
    return CauchyReal::constant(sum);
  }
  auto lz = lazy_;
  return CauchyReal::from_terms([lz](std::size_t n) {
    const std::size_t k = prefix_for_tail(lz->tail_after, Rational::pow2(-static_cast<long>(n) - 2));
    Rational sum(0);
    lz->atoms.visit(0, k, [&](const Atom& a) { sum += a.weight; });
    return sum;
  });
}

LowerReal DiscreteMeasure::open_mass(const SigmaSet& u) const {
  auto lz = lazy_;
  auto atoms = std::make_shared<std::vector<Atom>>(atoms_);
  return LowerReal::from_terms([lz, atoms, u](std::size_t t) {
    const IntervalSet w = pulled_union(u.enumeration, slots_for_round(t));
    Rational sum(0);
    auto take = [&](const Atom& a) {
      if (w.contains(a.location)) sum += a.weight;
    };
    if (lz) {
      lz->atoms.visit(0, t + 1, take);
    } else {
      for (const auto& a : *atoms) take(a);
    }
    return sum;
  });
}

Rational DiscreteMeasure::integrate(const PolyFunc& p) const {
  if (lazy_) throw Error(ErrorKind::UnsupportedMeasure, "lazy discrete measure has no exact integrals");
  Rational sum(0);
  for (const auto& a : atoms_) sum += a.weight * p.eval(a.location);
  return sum;
}

Rational DiscreteMeasure::integrate_approx(const PolyFunc& p, std::size_t n) const {
  if (!lazy_) return integrate(p);
  const Rational sup = p.sup_abs();
  if (sup.is_zero()) return Rational(0);
  const std::size_t k = prefix_for_tail(lazy_->tail_after, Rational::pow2(-static_cast<long>(n)) / sup);
  Rational sum(0);
  lazy_->atoms.visit(0, k, [&](const Atom& a) { sum += a.weight * p.eval(a.location); });
  return sum;
}

Rational DiscreteMeasure::mass(const IntervalSet& a) const {
  if (lazy_) throw Error(ErrorKind::UnsupportedMeasure, "lazy discrete measure has no exact masses");
  Rational sum(0);
  for (const auto& at : atoms_) {
    if (a.contains(at.location)) sum += at.weight;
  }
  return sum;
}

Rational DiscreteMeasure::tail_bound(const Rational& a, std::size_t effort) const {
  Rational sum(0);
  auto take = [&](const Atom& at) {
    if (abs(at.location) > a) sum += at.weight;
  };
  if (!lazy_) {
    for (const auto& at : atoms_) take(at);
    return sum;
  }
  lazy_->atoms.visit(0, effort, take);
  return sum + lazy_->tail_after(effort);
}

std::optional<std::vector<Rational>> DiscreteMeasure::atom_locations() const {
  if (lazy_) return std::nullopt;
  std::vector<Rational> xs;
  for (const auto& a : atoms_) xs.push_back(a.location);
  return xs;
}

// ---- polygonal density ------------------------------------------------------

namespace {

// ∫ over [l, r] of a piecewise-linear function with the given breakpoints.
Rational linear_integral(const PolyFunc& f, const Rational& l, const Rational& r) {
  if (!(l < r)) return Rational(0);
  std::vector<Rational> xs{l, r};
  for (const auto& v : f.vertices()) {
    if (l < v.x && v.x < r) xs.push_back(v.x);
  }
  std::sort(xs.begin(), xs.end());
  Rational sum(0);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    sum += (xs[i] - xs[i - 1]) * (f.eval(xs[i - 1]) + f.eval(xs[i])) / Rational(2);
  }
  return sum;
}

}  // namespace

PolyDensityMeasure::PolyDensityMeasure(PolyFunc density) : density_(std::move(density)) {
  for (const auto& v : density_.vertices()) {
    if (v.y.sign() < 0) throw Error(ErrorKind::Precondition, "density must be nonnegative");
  }
  total_ = linear_integral(density_, density_.vertices().front().x, density_.vertices().back().x);
}

CauchyReal PolyDensityMeasure::total_mass() const { return CauchyReal::constant(total_); }

Rational PolyDensityMeasure::mass(const IntervalSet& a) const {
  const Rational& lo = density_.vertices().front().x;
  const Rational& hi = density_.vertices().back().x;
  Rational sum(0);
  for (const auto& sp : a.spans()) {
    const Rational l = sp.lo ? max(*sp.lo, lo) : lo;
    const Rational r = sp.hi ? min(*sp.hi, hi) : hi;
    sum += linear_integral(density_, l, r);
  }
  return sum;
}

LowerReal PolyDensityMeasure::open_mass(const SigmaSet& u) const {
  auto self = *this;
  return LowerReal::from_terms([self, u](std::size_t t) {
    return self.mass(pulled_union(u.enumeration, slots_for_round(t)));
  });
}

Rational PolyDensityMeasure::integrate(const PolyFunc& p) const {
  const Rational& lo = density_.vertices().front().x;
  const Rational& hi = density_.vertices().back().x;
  std::vector<Rational> xs;
  for (const auto& v : density_.vertices()) xs.push_back(v.x);
  for (const auto& v : p.vertices()) {
    if (lo < v.x && v.x < hi) xs.push_back(v.x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  // The integrand is quadratic between merged breakpoints; Simpson is exact.
  Rational sum(0);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const Rational& l = xs[i - 1];
    const Rational& r = xs[i];
    const Rational m = midpoint(l, r);
    const Rational fl = p.eval(l) * density_.eval(l);
    const Rational fm = p.eval(m) * density_.eval(m);
    const Rational fr = p.eval(r) * density_.eval(r);
    sum += (r - l) * (fl + Rational(4) * fm + fr) / Rational(6);
  }
  return sum;
}

Rational PolyDensityMeasure::tail_bound(const Rational& a, std::size_t) const {
  if (a.sign() < 0) return total_;
  return total_ - mass(IntervalSet::closed(-a, a));
}

std::optional<IntervalSet> PolyDensityMeasure::diffuse_hull() const {
  return IntervalSet::closed(density_.vertices().front().x, density_.vertices().back().x);
}

// ---- integration of named functions -----------------------------------------

namespace {

Rational mass_upper(const Measure& mu) { return max(mu.total_mass().approx(0) + Rational(2), Rational(0)); }

}  // namespace

Rational integrate_named(const SupportedFunc& f, const Measure& mu, std::size_t n) {
  const long ln = static_cast<long>(n);
  // A power of two, so memo keys are shared across measures.
  const Rational err = pow2_at_most(Rational::pow2(-ln - 1) / (mass_upper(mu) + Rational(1)));
  const PolyFunc psi = approx_polygonal(f, err);
  return mu.integrate_approx(psi, n + 1);
}

Rational integrate_named(const BoundedFunc& f, const Measure& mu, std::size_t n) {
  const long ln = static_cast<long>(n);
  const Rational charge = Rational(2) * f.bound + Rational(1);
  const Rational tail_target = Rational::pow2(-ln - 2) / charge;
  std::optional<Rational> a;
  for (long j = 0; j < 48 && !a; ++j) {
    const Rational cand = Rational::pow2(j);
    if (mu.tail_bound(cand, std::size_t{16} << std::min(j, 16L)) <= tail_target) a = cand;
  }
  if (!a) throw Error(ErrorKind::SearchExhausted, "no window leaves a small enough tail");
  const Rational err = pow2_at_most(min(Rational(1), Rational::pow2(-ln - 2) / (mass_upper(mu) + Rational(1))));
  const PolyFunc core = approx_on_interval(f.name, *f.memo, -*a, *a, err);
  std::vector<Vertex> vs{{-*a - Rational(1), Rational(0)}};
  for (const auto& v : core.vertices()) vs.push_back(v);
  vs.push_back({*a + Rational(1), Rational(0)});
  return mu.integrate_approx(PolyFunc(std::move(vs), Extension::ZeroOutside), n + 1);
}

// ---- almost decidable sets ------------------------------------------------------

Rational null_sphere_radius(const Measure& mu, const Rational& center, const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw Error(ErrorKind::Precondition, "radius window must be nonempty");
  const auto atoms = mu.atom_locations();
  if (!atoms) throw Error(ErrorKind::UnsupportedMeasure, "atom set is not known to be finite");
  std::set<Rational> bad;
  for (const auto& x : *atoms) bad.insert(abs(x - center));
  for (long m = 1; m <= 4096; ++m) {
    for (long k = 1; k < 2 * m; ++k) {
      const Rational r = lo + (hi - lo) * Rational(k, 2 * m);
      if (!bad.count(r)) return r;
    }
  }
  throw Error(ErrorKind::SearchExhausted, "no null sphere radius found");
}

namespace {

AlmostDecidableBall make_ball(const MeasurePtr& mu, const Rational& c, const Rational& r) {
  SigmaSet u = sigma_from_set(IntervalSet::open(c - r, c + r));
  SigmaSet v = sigma_from_set(IntervalSet::open_ray_below(c - r).unite(IntervalSet::open_ray_above(c + r)));
  return AlmostDecidableBall{c, r, AlmostDecidablePair{std::move(u), std::move(v), mu}};
}

}  // namespace

AlmostDecidableBall almost_decidable_ball(const MeasurePtr& mu, const Rational& center, const Rational& radius_bound) {
  if (radius_bound.sign() <= 0) throw Error(ErrorKind::Precondition, "radius bound must be positive");
  return make_ball(mu, center, null_sphere_radius(*mu, center, Rational(0), radius_bound));
}

Stream<AlmostDecidableBall> almost_decidable_cover(const MeasurePtr& mu, const Rational& s) {
  if (s.sign() <= 0) throw Error(ErrorKind::Precondition, "cover scale must be positive");
  const Rational h = s / Rational(2);
  struct State {
    std::deque<BigInt> priority;
    std::set<BigInt> seen;
    long sweep = 0;  // position in 0, 1, -1, 2, -2, ...
  };
  auto st = std::make_shared<State>();
  auto add = [&](const BigInt& j) {
    if (st->seen.insert(j).second) st->priority.push_back(j);
  };
  if (const auto atoms = mu->atom_locations()) {
    for (const auto& x : *atoms) add((x / h + Rational(1, 2)).floor());
  }
  if (const auto hull = mu->diffuse_hull(); hull && !hull->is_empty()) {
    const Rational lo = *hull->spans().front().lo;
    const Rational hi = *hull->spans().back().hi;
    for (BigInt j = (lo / h).floor(); j <= (hi / h).ceil(); ++j) add(j);
  }
  return Stream<AlmostDecidableBall>([mu, s, h, st]() {
    BigInt j;
    if (!st->priority.empty()) {
      j = st->priority.front();
      st->priority.pop_front();
    } else {
      do {
        const long i = st->sweep++;
        j = (i % 2 == 0) ? BigInt(-(i / 2)) : BigInt(i / 2 + 1);
      } while (st->seen.count(j));
    }
    const Rational c = h * Rational(j);
    return make_ball(mu, c, null_sphere_radius(*mu, c, s / Rational(3), s));
  });
}

LowerReal mass_of_interval(const MeasurePtr& mu, const Rational& a, const Rational& b) {
  auto best = std::make_shared<std::optional<Rational>>();
  return LowerReal::from_terms([mu, a, b, best](std::size_t k) {
    const PolyFunc t = indicator_approx(a, b, static_cast<unsigned>(k));
    Rational v = mu->exact() ? mu->integrate(t)
                             : mu->integrate_approx(t, k + 1) - Rational::pow2(-static_cast<long>(k) - 1);
    if (*best && v < **best) v = **best;
    *best = v;
    return v;
  });
}

}  // namespace effconv
