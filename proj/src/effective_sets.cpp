#include "effconv/effective_sets.hpp"

#include <deque>
#include <memory>

#include "effconv/error.hpp"

namespace effconv {

namespace {

constexpr int kScanPerLevel = 8;

BigInt zigzag(const BigInt& p) { return p >= 0 ? BigInt(2 * p) : BigInt(-2 * p - 1); }
BigInt unzigzag(const BigInt& z) {
  BigInt half = z / 2;
  return (z % 2 == 0) ? half : BigInt(-half - 1);
}

// Inner approximation of one open component at refinement level s.
std::pair<Rational, Rational> shrink_component(const Span& sp, long s) {
  const Rational far = Rational::pow2(s);
  const Rational near = Rational::pow2(-(s + 2));
  if (sp.lo && sp.hi) {
    const Rational d = (*sp.hi - *sp.lo) * near;
    return {*sp.lo + d, *sp.hi - d};
  }
  if (sp.lo) return {*sp.lo + near, *sp.lo + far};
  if (sp.hi) return {*sp.hi - far, *sp.hi - near};
  return {-far, far};
}

// Fair index-order scan over all codes, a bounded number per call.
class CodeScan {
 public:
  template <class Accept>
  void step(int budget, Accept&& accept, std::deque<IntervalCode>& found) {
    for (int i = 0; i < budget; ++i) {
      const IntervalCode c = IntervalCode::decode(next_);
      next_ += 1;
      if (accept(c)) found.push_back(c);
    }
  }

 private:
  BigInt next_ = 0;
};

}  // namespace

void RationalInterval::validate() const {
  if (kind == IntervalKind::Open && !(left < right))
    throw Error(ErrorKind::MalformedInterval, "open interval (" + left.str() + ", " + right.str() + ")");
  if (kind == IntervalKind::Closed && right < left)
    throw Error(ErrorKind::MalformedInterval, "closed interval [" + left.str() + ", " + right.str() + "]");
}

BigInt cantor_pair(const BigInt& a, const BigInt& b) {
  const BigInt s = a + b;
  return s * (s + 1) / 2 + b;
}

std::pair<BigInt, BigInt> cantor_unpair(const BigInt& z) {
  BigInt disc = 8 * z + 1;
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
  BigInt w = (root - 1) / 2;
  BigInt t = w * (w + 1) / 2;
  BigInt b = z - t;
  BigInt a = w - b;
  return {a, b};
}

IntervalCode IntervalCode::from_bounds(const Rational& left, const Rational& right) {
  if (!(left < right)) throw Error(ErrorKind::MalformedInterval, "ball needs left < right");
  return IntervalCode{midpoint(left, right), (right - left) / Rational(2)};
}

IntervalCode IntervalCode::decode(const BigInt& code) {
  const auto [c, r] = cantor_unpair(code);
  const auto [zc, qc] = cantor_unpair(c);
  const auto [pr, qr] = cantor_unpair(r);
  return IntervalCode{Rational(unzigzag(zc), BigInt(qc + 1)), Rational(BigInt(pr + 1), BigInt(qr + 1))};
}

BigInt IntervalCode::encode() const {
  if (radius.sign() <= 0) throw Error(ErrorKind::MalformedInterval, "radius must be positive");
  return cantor_pair(cantor_pair(zigzag(center.num()), center.den() - 1),
                     cantor_pair(radius.num() - 1, radius.den() - 1));
}

IntervalSet pulled_union(const CodeEnumeration& e, std::size_t count) {
  std::vector<Span> spans;
  e.visit(0, count, [&](const std::optional<IntervalCode>& c) {
    if (c) spans.push_back(Span{c->left(), false, c->right(), false});
  });
  return IntervalSet::from_spans(std::move(spans));
}

SigmaSet sigma_from_set(const IntervalSet& open_set) {
  if (!open_set.is_open()) throw Error(ErrorKind::MalformedInterval, "sigma set geometry must be open");
  struct State {
    IntervalSet set;
    long level = 0;
    std::deque<IntervalCode> queue;
    std::deque<IntervalCode> scanned;
    CodeScan scan;
  };
  auto st = std::make_shared<State>();
  st->set = open_set;
  CodeEnumeration e([st]() -> std::optional<IntervalCode> {
    if (st->queue.empty() && !st->set.is_empty()) {
      for (const auto& sp : st->set.spans()) {
        const auto [a, b] = shrink_component(sp, st->level);
        st->queue.push_back(IntervalCode::from_bounds(a, b));
      }
      st->scan.step(kScanPerLevel,
                    [&](const IntervalCode& c) { return st->set.contains_open_interval(c.left(), c.right()); },
                    st->scanned);
      if (!st->scanned.empty()) {
        st->queue.push_back(st->scanned.front());
        st->scanned.pop_front();
      }
      ++st->level;
    }
    if (st->queue.empty()) return std::nullopt;
    IntervalCode c = st->queue.front();
    st->queue.pop_front();
    return c;
  });
  return SigmaSet{std::move(e), open_set};
}

SigmaSet sigma_from_intervals(const std::vector<RationalInterval>& intervals) {
  std::vector<Span> spans;
  for (const auto& iv : intervals) {
    iv.validate();
    if (iv.kind != IntervalKind::Open) throw Error(ErrorKind::MalformedInterval, "sigma set pieces must be open");
    spans.push_back(Span{iv.left, false, iv.right, false});
  }
  return sigma_from_set(IntervalSet::from_spans(std::move(spans)));
}

PiSet pi_from_set(const IntervalSet& closed_set) {
  if (!closed_set.is_closed()) throw Error(ErrorKind::MalformedInterval, "pi set geometry must be closed");
  return PiSet{sigma_from_set(closed_set.complement()).enumeration, closed_set};
}

PiSet pi_from_complement(const std::vector<RationalInterval>& closed_pieces) {
  std::vector<Span> spans;
  for (const auto& iv : closed_pieces) {
    iv.validate();
    if (iv.kind != IntervalKind::Closed) throw Error(ErrorKind::MalformedInterval, "pi set pieces must be closed");
    spans.push_back(Span{iv.left, true, iv.right, true});
  }
  return pi_from_set(IntervalSet::from_spans(std::move(spans)));
}

Membership sigma_member(const CauchyReal& x, const SigmaSet& u, Fuel fuel) {
  for (std::size_t t = 0; t < fuel.budget; ++t) {
    const IntervalSet w = pulled_union(u.enumeration, slots_for_round(t));
    const Rational q = x.approx(t);
    const Rational e = Rational::pow2(1 - static_cast<long>(t));
    if (w.contains_closed_interval(q - e, q + e)) return Membership::Inside;
  }
  return Membership::Undetermined;
}

namespace {

// Lower bound on d(y, complement of w) valid for every y in [lo, hi].
Rational clearance(const IntervalSet& w, const Rational& lo, const Rational& hi) {
  for (const auto& sp : w.spans()) {
    if (!sp.contains(lo) || !sp.contains(hi)) continue;
    if (!sp.lo && !sp.hi) throw Error(ErrorKind::Precondition, "distance to an empty closed set");
    std::optional<Rational> best;
    if (sp.lo) best = lo - *sp.lo;
    if (sp.hi) best = best ? min(*best, *sp.hi - hi) : *sp.hi - hi;
    return *best;
  }
  return Rational(0);
}

}  // namespace

LowerReal dist_to_closed(const CauchyReal& x, const PiSet& c) {
  struct State {
    std::size_t t = 0;
    Rational best = 0;
  };
  auto st = std::make_shared<State>();
  return LowerReal(Stream<Rational>([x, c, st]() {
    const std::size_t t = st->t++;
    const IntervalSet w = pulled_union(c.avoid, slots_for_round(t));
    const Rational q = x.approx(t);
    const Rational e = Rational::pow2(1 - static_cast<long>(t));
    st->best = max(st->best, clearance(w, q - e, q + e));
    return st->best;
  }));
}

Rational distance_lower_bound(const Rational& x, const PiSet& c, Fuel rounds) {
  const std::size_t t = rounds.budget == 0 ? 0 : rounds.budget - 1;
  return clearance(pulled_union(c.avoid, slots_for_round(t)), x, x);
}

bool certified_avoids(const PiSet& c, const IntervalCode& code, Fuel rounds) {
  const std::size_t t = rounds.budget == 0 ? 0 : rounds.budget - 1;
  return pulled_union(c.avoid, slots_for_round(t)).contains_open_interval(code.left(), code.right());
}

PiSet closed_neighborhood(const PiSet& c, const Rational& s) {
  if (s.sign() <= 0) throw Error(ErrorKind::Precondition, "neighborhood radius must be positive");
  struct State {
    std::size_t round = 0;
    std::deque<IntervalCode> queue;
    std::deque<IntervalCode> scanned;
    CodeScan scan;
  };
  auto st = std::make_shared<State>();
  CodeEnumeration e([c, s, st]() -> std::optional<IntervalCode> {
    if (st->queue.empty()) {
      const std::size_t t = st->round++;
      const IntervalSet w = pulled_union(c.avoid, slots_for_round(t));
      const bool c_empty = w.spans().size() == 1 && !w.spans()[0].lo && !w.spans()[0].hi;
      // d(a, C) > r + s is certified from the pulled avoided balls alone.
      auto certified = [&](const IntervalCode& code) {
        return c_empty || clearance(w, code.center, code.center) > code.radius + s;
      };
      const Rational eta = Rational::pow2(-static_cast<long>(t) - 2);
      const Rational far = Rational::pow2(static_cast<long>(t));
      for (const auto& sp : w.spans()) {
        std::optional<Rational> a, b;
        if (sp.lo) a = *sp.lo + s + eta;
        if (sp.hi) b = *sp.hi - s - eta;
        if (!a && !b) { a = -far; b = far; }
        if (!a) a = *b - far;
        if (!b) b = *a + far;
        if (*a < *b) {
          const IntervalCode code = IntervalCode::from_bounds(*a, *b);
          if (certified(code)) st->queue.push_back(code);
        }
      }
      st->scan.step(kScanPerLevel, certified, st->scanned);
      if (!st->scanned.empty()) {
        st->queue.push_back(st->scanned.front());
        st->scanned.pop_front();
      }
    }
    if (st->queue.empty()) return std::nullopt;
    IntervalCode code = st->queue.front();
    st->queue.pop_front();
    return code;
  });
  std::optional<IntervalSet> geometry;
  if (c.geometry) geometry = c.geometry->closed_neighborhood(s);
  return PiSet{std::move(e), std::move(geometry)};
}

bool is_minimal_cover(const IntervalSet& k, const std::vector<IntervalCode>& cover) {
  auto covers = [&](std::size_t skip) {
    std::vector<Span> spans;
    for (std::size_t i = 0; i < cover.size(); ++i) {
      if (i != skip) spans.push_back(Span{cover[i].left(), false, cover[i].right(), false});
    }
    return k.subset_of(IntervalSet::from_spans(std::move(spans)));
  };
  if (!covers(cover.size())) return false;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (covers(i)) return false;
  }
  return true;
}

CompactName compact_from_set(const IntervalSet& closed_bounded) {
  if (!closed_bounded.is_closed() || !closed_bounded.is_bounded())
    throw Error(ErrorKind::MalformedInterval, "compact geometry must be closed and bounded");
  auto cover_at = [k = closed_bounded](std::size_t level) {
    const Rational eps = Rational::pow2(-static_cast<long>(level));
    std::vector<IntervalCode> cover;
    for (const auto& sp : k.spans()) {
      const Rational& a = *sp.lo;
      const Rational& b = *sp.hi;
      if (b - a <= eps * Rational(2)) {
        cover.push_back(IntervalCode::from_bounds(a - eps, b + eps));
      } else {
        cover.push_back(IntervalCode::from_bounds(a - eps, a + eps));
        cover.push_back(IntervalCode::from_bounds(a + eps / Rational(2), b - eps / Rational(2)));
        cover.push_back(IntervalCode::from_bounds(b - eps, b + eps));
      }
    }
    // Greedy pruning leaves a minimal subcover.
    for (std::size_t i = 0; i < cover.size();) {
      std::vector<Span> rest;
      for (std::size_t j = 0; j < cover.size(); ++j) {
        if (j != i) rest.push_back(Span{cover[j].left(), false, cover[j].right(), false});
      }
      if (k.subset_of(IntervalSet::from_spans(std::move(rest)))) {
        cover.erase(cover.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
    return cover;
  };
  return CompactName{Stream<std::vector<IntervalCode>>::from_index(cover_at), closed_bounded};
}

std::pair<CauchyReal, CauchyReal> compact_bounds(const CompactName& k, std::size_t max_covers) {
  // q_n is the midpoint of the extreme member of the first cover whose
  // extreme member is at most 2^-(n+1) wide; that member meets K.
  auto extreme = [k, max_covers](bool leftmost) {
    return CauchyReal::from_terms([k, max_covers, leftmost](std::size_t n) {
      const Rational width = Rational::pow2(-static_cast<long>(n) - 1);
      for (std::size_t i = 0; i < max_covers; ++i) {
        const auto cover = k.covers.at(i);
        if (cover.empty()) throw Error(ErrorKind::EmptyCompact, "cover " + std::to_string(i) + " is empty");
        const IntervalCode* best = &cover.front();
        for (const auto& c : cover) {
          if (leftmost ? c.left() < best->left() : c.right() > best->right()) best = &c;
        }
        if (best->radius * Rational(2) <= width) return best->center;
      }
      throw Error(ErrorKind::InsufficientNameProgress, "compact name covers stopped shrinking");
    });
  };
  return {extreme(true), extreme(false)};
}

}  // namespace effconv
