#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "effconv/exact_reals.hpp"
#include "effconv/interval_set.hpp"
#include "effconv/rational.hpp"
#include "effconv/stream.hpp"

namespace effconv {

enum class IntervalKind { Open, Closed };

struct RationalInterval {
  Rational left;
  Rational right;
  IntervalKind kind = IntervalKind::Open;

  /// Throws Error(MalformedInterval) unless left < right (open) or left <= right (closed).
  void validate() const;
};

/// The open ball B(center, radius) with radius > 0, addressed by a natural
/// number.
///
/// Code layout: with <a, b> = (a + b)(a + b + 1)/2 + b the Cantor pairing and
/// zz(p) = 2p for p >= 0, -2p - 1 for p < 0,
///
///   code = << zz(pc), qc - 1 >, < pr - 1, qr - 1 >>
///
/// where pc/qc is the center and pr/qr the radius. Every natural decodes to a
/// (possibly unreduced) pair of fractions; encode() always uses lowest terms.
struct IntervalCode {
  Rational center;
  Rational radius;

  static IntervalCode from_bounds(const Rational& left, const Rational& right);
  static IntervalCode decode(const BigInt& code);
  BigInt encode() const;

  Rational left() const { return center - radius; }
  Rational right() const { return center + radius; }

  friend bool operator==(const IntervalCode&, const IntervalCode&) = default;
};

BigInt cantor_pair(const BigInt& a, const BigInt& b);
std::pair<BigInt, BigInt> cantor_unpair(const BigInt& z);

/// Enumerations of interval codes are infinite; a step that has nothing new
/// to report yields an empty slot.
using CodeEnumeration = Stream<std::optional<IntervalCode>>;

/// Union of the first `count` enumerated balls.
IntervalSet pulled_union(const CodeEnumeration& e, std::size_t count);

/// Number of enumeration slots a semi-decision reads in round t.
constexpr std::size_t slots_for_round(std::size_t t) { return 2 * (t + 1); }

/// Effectively open set: the union of the enumerated balls.
struct SigmaSet {
  CodeEnumeration enumeration;
  std::optional<IntervalSet> geometry;  // exact shape, when known
};

/// Effectively closed set, given by an enumeration of balls it avoids.
struct PiSet {
  CodeEnumeration avoid;
  std::optional<IntervalSet> geometry;  // the closed set itself, when known
};

/// Enumerates an open IntervalSet. Level s emits one inner ball per
/// component, shrinking toward the component as s grows, and a bounded
/// index-order scan makes every contained code appear eventually.
SigmaSet sigma_from_set(const IntervalSet& open_set);
SigmaSet sigma_from_intervals(const std::vector<RationalInterval>& intervals);
PiSet pi_from_complement(const std::vector<RationalInterval>& closed_pieces);
PiSet pi_from_set(const IntervalSet& closed_set);

enum class Membership { Inside, Undetermined };

/// Round t reads slots_for_round(t) enumeration slots and the name at
/// precision t; answers Inside once [q_t - 2^(-t+1), q_t + 2^(-t+1)] sits in
/// the pulled union.
Membership sigma_member(const CauchyReal& x, const SigmaSet& u, Fuel fuel);

/// Lower bounds on d(x, C): term t is read from the first
/// slots_for_round(t) avoided balls.
LowerReal dist_to_closed(const CauchyReal& x, const PiSet& c);

/// Lower bound on d(x, C) for a rational point, from `rounds` rounds.
Rational distance_lower_bound(const Rational& x, const PiSet& c, Fuel rounds);

/// Whether the code's interval lies inside the union of avoided balls pulled
/// in `rounds` rounds (so it is certified disjoint from C).
bool certified_avoids(const PiSet& c, const IntervalCode& code, Fuel rounds);

/// closure(B(C, s)) as a PiSet. A code (a, r) is enumerated once a finite
/// lower bound on d(a, C) strictly exceeds r + s.
PiSet closed_neighborhood(const PiSet& c, const Rational& s);

/// A compact set named by a stream of minimal finite open covers.
struct CompactName {
  Stream<std::vector<IntervalCode>> covers;
  std::optional<IntervalSet> geometry;
};

/// Level s covers each component [a, b] with balls of slack 2^-s at the
/// ends, then drops redundant members so every cover is minimal.
CompactName compact_from_set(const IntervalSet& closed_bounded);

/// Whether `cover` covers `k` and no proper subfamily does.
bool is_minimal_cover(const IntervalSet& k, const std::vector<IntervalCode>& cover);

/// (min K, max K) as Cauchy names, read off the extreme members of the
/// covers. Raises Error(EmptyCompact) on an empty cover and
/// Error(InsufficientNameProgress) if the extreme members stop shrinking
/// within `max_covers` covers.
std::pair<CauchyReal, CauchyReal> compact_bounds(const CompactName& k, std::size_t max_covers = 4096);

}  // namespace effconv
