#pragma once

#include <optional>
#include <vector>

#include "effconv/rational.hpp"

namespace effconv {

/// One maximal piece of an IntervalSet. A missing bound is infinite.
struct Span {
  std::optional<Rational> lo;
  bool lo_closed = false;
  std::optional<Rational> hi;
  bool hi_closed = false;

  bool contains(const Rational& x) const;
  bool bounded() const { return lo.has_value() && hi.has_value(); }
};

/// Finite union of intervals with rational (or infinite) endpoints, kept as
/// sorted, pairwise separated spans. This is the exact geometry behind the
/// concrete open and closed sets used throughout the library; semi-decision
/// procedures never look at it, only oracles and exact mass computations do.
class IntervalSet {
 public:
  IntervalSet() = default;

  static IntervalSet empty() { return {}; }
  static IntervalSet whole_line();
  static IntervalSet open(const Rational& a, const Rational& b);
  static IntervalSet closed(const Rational& a, const Rational& b);
  static IntervalSet point(const Rational& x) { return closed(x, x); }
  static IntervalSet open_ray_above(const Rational& a);  // (a, +inf)
  static IntervalSet open_ray_below(const Rational& b);  // (-inf, b)
  static IntervalSet from_spans(std::vector<Span> spans);

  const std::vector<Span>& spans() const { return spans_; }
  bool is_empty() const { return spans_.empty(); }
  bool is_open() const;
  bool is_closed() const;
  bool is_bounded() const;

  bool contains(const Rational& x) const;
  /// Whether the open interval (a, b) lies inside the set.
  bool contains_open_interval(const Rational& a, const Rational& b) const;
  /// Whether the closed interval [a, b] lies inside the set.
  bool contains_closed_interval(const Rational& a, const Rational& b) const;
  /// Whether the open interval (a, b) misses the set.
  bool disjoint_from_open_interval(const Rational& a, const Rational& b) const;

  IntervalSet complement() const;
  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  bool subset_of(const IntervalSet& other) const;

  /// closure(B(A, s)) = {x : d(x, A) <= s}.
  IntervalSet closed_neighborhood(const Rational& s) const;
  /// B(A, s) = {x : d(x, A) < s}.
  IntervalSet open_neighborhood(const Rational& s) const;

  std::optional<Rational> min() const;  // lower endpoint of the first span
  std::optional<Rational> max() const;

  friend bool operator==(const IntervalSet& a, const IntervalSet& b);

 private:
  std::vector<Span> spans_;
};

}  // namespace effconv
