#include "effconv/interval_set.hpp"

#include <algorithm>

#include "effconv/error.hpp"

namespace effconv {

namespace {

// Ordering of lower endpoints: -inf first; at equal values a closed end
// starts earlier than an open one.
bool lo_before(const Span& a, const Span& b) {
  if (!a.lo) return b.lo.has_value();
  if (!b.lo) return false;
  if (*a.lo != *b.lo) return *a.lo < *b.lo;
  return a.lo_closed && !b.lo_closed;
}

// Whether span `a`'s upper end reaches at least as far as `b`'s.
bool hi_at_least(const Span& a, const Span& b) {
  if (!a.hi) return true;
  if (!b.hi) return false;
  if (*a.hi != *b.hi) return *a.hi > *b.hi;
  return a.hi_closed || !b.hi_closed;
}

// Whether `next` (starting no earlier than `cur`) touches or overlaps `cur`.
bool joins(const Span& cur, const Span& next) {
  if (!cur.hi || !next.lo) return true;
  if (*next.lo < *cur.hi) return true;
  if (*next.lo == *cur.hi) return cur.hi_closed || next.lo_closed;
  return false;
}

bool well_formed(const Span& s) {
  if (!s.lo || !s.hi) return true;
  if (*s.lo < *s.hi) return true;
  return *s.lo == *s.hi && s.lo_closed && s.hi_closed;
}

}  // namespace

bool Span::contains(const Rational& x) const {
  if (lo && (x < *lo || (x == *lo && !lo_closed))) return false;
  if (hi && (x > *hi || (x == *hi && !hi_closed))) return false;
  return true;
}

IntervalSet IntervalSet::from_spans(std::vector<Span> spans) {
  std::vector<Span> kept;
  for (auto& s : spans) {
    if (!s.lo) s.lo_closed = false;
    if (!s.hi) s.hi_closed = false;
    if (well_formed(s)) kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end(), lo_before);
  IntervalSet out;
  for (auto& s : kept) {
    if (!out.spans_.empty() && joins(out.spans_.back(), s)) {
      Span& cur = out.spans_.back();
      if (!hi_at_least(cur, s)) {
        cur.hi = s.hi;
        cur.hi_closed = s.hi_closed;
      }
    } else {
      out.spans_.push_back(std::move(s));
    }
  }
  return out;
}

IntervalSet IntervalSet::whole_line() { return from_spans({Span{}}); }

IntervalSet IntervalSet::open(const Rational& a, const Rational& b) {
  if (!(a < b)) throw Error(ErrorKind::MalformedInterval, "open interval needs left < right");
  return from_spans({Span{a, false, b, false}});
}

IntervalSet IntervalSet::closed(const Rational& a, const Rational& b) {
  if (b < a) throw Error(ErrorKind::MalformedInterval, "closed interval needs left <= right");
  return from_spans({Span{a, true, b, true}});
}

IntervalSet IntervalSet::open_ray_above(const Rational& a) { return from_spans({Span{a, false, std::nullopt, false}}); }
IntervalSet IntervalSet::open_ray_below(const Rational& b) { return from_spans({Span{std::nullopt, false, b, false}}); }

bool IntervalSet::is_open() const {
  return std::all_of(spans_.begin(), spans_.end(), [](const Span& s) {
    return !(s.lo && s.lo_closed) && !(s.hi && s.hi_closed);
  });
}

bool IntervalSet::is_closed() const {
  return std::all_of(spans_.begin(), spans_.end(), [](const Span& s) {
    return (!s.lo || s.lo_closed) && (!s.hi || s.hi_closed);
  });
}

bool IntervalSet::is_bounded() const {
  return std::all_of(spans_.begin(), spans_.end(), [](const Span& s) { return s.bounded(); });
}

bool IntervalSet::contains(const Rational& x) const {
  return std::any_of(spans_.begin(), spans_.end(), [&](const Span& s) { return s.contains(x); });
}

bool IntervalSet::contains_open_interval(const Rational& a, const Rational& b) const {
  return IntervalSet::open(a, b).subset_of(*this);
}

bool IntervalSet::contains_closed_interval(const Rational& a, const Rational& b) const {
  return IntervalSet::closed(a, b).subset_of(*this);
}

bool IntervalSet::disjoint_from_open_interval(const Rational& a, const Rational& b) const {
  return intersect(IntervalSet::open(a, b)).is_empty();
}

IntervalSet IntervalSet::complement() const {
  std::vector<Span> gaps;
  Span pending{std::nullopt, false, std::nullopt, false};
  bool open_start = true;  // pending gap starts at -inf
  for (const auto& s : spans_) {
    if (s.lo) {
      Span g = pending;
      if (open_start) g.lo.reset();
      g.hi = s.lo;
      g.hi_closed = !s.lo_closed;
      gaps.push_back(g);
    }
    if (!s.hi) return from_spans(std::move(gaps));
    pending = Span{s.hi, !s.hi_closed, std::nullopt, false};
    open_start = false;
  }
  Span last = pending;
  if (open_start) last.lo.reset();
  gaps.push_back(last);
  return from_spans(std::move(gaps));
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Span> all = spans_;
  all.insert(all.end(), other.spans_.begin(), other.spans_.end());
  return from_spans(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  return complement().unite(other.complement()).complement();
}

bool IntervalSet::subset_of(const IntervalSet& other) const { return intersect(other.complement()).is_empty(); }

IntervalSet IntervalSet::closed_neighborhood(const Rational& s) const {
  std::vector<Span> out;
  for (const auto& sp : spans_) {
    Span n;
    if (sp.lo) { n.lo = *sp.lo - s; n.lo_closed = true; }
    if (sp.hi) { n.hi = *sp.hi + s; n.hi_closed = true; }
    out.push_back(n);
  }
  return from_spans(std::move(out));
}

IntervalSet IntervalSet::open_neighborhood(const Rational& s) const {
  std::vector<Span> out;
  for (const auto& sp : spans_) {
    Span n;
    if (sp.lo) n.lo = *sp.lo - s;
    if (sp.hi) n.hi = *sp.hi + s;
    out.push_back(n);
  }
  return from_spans(std::move(out));
}

std::optional<Rational> IntervalSet::min() const {
  if (spans_.empty()) return std::nullopt;
  return spans_.front().lo;
}

std::optional<Rational> IntervalSet::max() const {
  if (spans_.empty()) return std::nullopt;
  return spans_.back().hi;
}

bool operator==(const IntervalSet& a, const IntervalSet& b) {
  if (a.spans_.size() != b.spans_.size()) return false;
  for (std::size_t i = 0; i < a.spans_.size(); ++i) {
    const Span& x = a.spans_[i];
    const Span& y = b.spans_[i];
    if (x.lo != y.lo || x.hi != y.hi || x.lo_closed != y.lo_closed || x.hi_closed != y.hi_closed) return false;
  }
  return true;
}

}  // namespace effconv
