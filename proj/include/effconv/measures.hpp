#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "effconv/effective_functions.hpp"
#include "effconv/effective_sets.hpp"
#include "effconv/exact_reals.hpp"
#include "effconv/interval_set.hpp"
#include "effconv/rational.hpp"

namespace effconv {

/// A finite Borel measure on the line. μ(ℝ) is a computable real and μ(U)
/// is left-c.e. uniformly in a name of U.
class Measure {
 public:
  virtual ~Measure() = default;

  virtual CauchyReal total_mass() const = 0;

  /// Lower bounds on μ(U); term t reads slots_for_round(t) balls of U.
  virtual LowerReal open_mass(const SigmaSet& u) const = 0;

  /// Exact ∫p dμ. Raises Error(UnsupportedMeasure) when no exact value is
  /// available.
  virtual Rational integrate(const PolyFunc& p) const;

  /// ∫p dμ within 2^-n.
  virtual Rational integrate_approx(const PolyFunc& p, std::size_t /*n*/) const { return integrate(p); }

  /// Exact μ(A). Raises Error(UnsupportedMeasure) when unavailable.
  virtual Rational mass(const IntervalSet& a) const;

  /// Upper bound on μ(ℝ \ [-a, a]); nonincreasing in `effort` and tending
  /// to the true value.
  virtual Rational tail_bound(const Rational& a, std::size_t effort) const = 0;

  /// Every point of positive mass, when that set is known to be finite.
  virtual std::optional<std::vector<Rational>> atom_locations() const = 0;

  /// Bounded set carrying all non-atomic mass (empty for discrete
  /// measures), used to place cover balls.
  virtual std::optional<IntervalSet> diffuse_hull() const { return std::nullopt; }

  virtual bool exact() const { return true; }
};

using MeasurePtr = std::shared_ptr<const Measure>;

struct Atom {
  Rational location;
  Rational weight;
};

/// Σ w_i δ_{x_i}: either a finite list, or a lazily generated list with a
/// declared bound on the mass after every prefix.
class DiscreteMeasure : public Measure {
 public:
  /// Weights must be positive; repeated locations are merged.
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  /// Atom i from `atom(i)`; tail_after(k) bounds the total weight of atoms
  /// k, k+1, ... and must tend to 0.
  static std::shared_ptr<DiscreteMeasure> lazy(std::function<Atom(std::size_t)> atom,
                                               std::function<Rational(std::size_t)> tail_after);

  static std::shared_ptr<DiscreteMeasure> dirac(const Rational& x, const Rational& w = Rational(1));
  static std::shared_ptr<DiscreteMeasure> zero();

  CauchyReal total_mass() const override;
  LowerReal open_mass(const SigmaSet& u) const override;
  Rational integrate(const PolyFunc& p) const override;
  Rational integrate_approx(const PolyFunc& p, std::size_t n) const override;
  Rational mass(const IntervalSet& a) const override;
  Rational tail_bound(const Rational& a, std::size_t effort) const override;
  std::optional<std::vector<Rational>> atom_locations() const override;
  bool exact() const override { return !lazy_; }

  bool is_lazy() const { return static_cast<bool>(lazy_); }
  /// The finite atom list (sorted by location); empty for lazy measures.
  const std::vector<Atom>& atoms() const { return atoms_; }

 private:
  struct Lazy {
    Stream<Atom> atoms;
    std::function<Rational(std::size_t)> tail_after;
  };
  DiscreteMeasure() = default;
  std::vector<Atom> atoms_;
  std::shared_ptr<Lazy> lazy_;
};

/// Absolutely continuous measure whose density is a nonnegative polygonal
/// function on [first vertex, last vertex] and 0 elsewhere. The end values
/// may be nonzero (e.g. the uniform density on [0, 1]).
class PolyDensityMeasure : public Measure {
 public:
  explicit PolyDensityMeasure(PolyFunc density);

  CauchyReal total_mass() const override;
  LowerReal open_mass(const SigmaSet& u) const override;
  Rational integrate(const PolyFunc& p) const override;
  Rational mass(const IntervalSet& a) const override;
  Rational tail_bound(const Rational& a, std::size_t effort) const override;
  std::optional<std::vector<Rational>> atom_locations() const override { return std::vector<Rational>{}; }
  std::optional<IntervalSet> diffuse_hull() const override;

  const PolyFunc& density() const { return density_; }

 private:
  PolyFunc density_;
  Rational total_;
};

Rational integrate_poly(const PolyFunc& p, const Measure& mu);

/// ∫f dμ within 2^-n, via a polygonal approximation of f.
Rational integrate_named(const SupportedFunc& f, const Measure& mu, std::size_t n);

/// Continuous f with |f| <= bound everywhere, not necessarily compactly
/// supported.
struct BoundedFunc {
  CompactOpenName name;
  Rational bound;
  std::shared_ptr<detail::WindowMemo> memo = make_window_memo();
};

/// ∫f dμ within 2^-n; mass outside a large [-a, a] is charged at 2·bound + 1.
Rational integrate_named(const BoundedFunc& f, const Measure& mu, std::size_t n);

/// U, V disjoint effectively open sets with μ(U ∪ V) = μ(ℝ) and U ∪ V dense.
struct AlmostDecidablePair {
  SigmaSet u;
  SigmaSet v;
  MeasurePtr measure;
};

struct AlmostDecidableBall {
  Rational center;
  Rational radius;
  AlmostDecidablePair pair;  // U = B(center, radius), V = exterior of its closure
};

/// Radius in (lo, hi) whose sphere around `center` carries no mass, taken
/// from the grids lo + (hi - lo)·k/(2m), m = 1, 2, ...
Rational null_sphere_radius(const Measure& mu, const Rational& center, const Rational& lo, const Rational& hi);

/// Ball with radius in (0, radius_bound) and μ-null sphere.
AlmostDecidableBall almost_decidable_ball(const MeasurePtr& mu, const Rational& center, const Rational& radius_bound);

/// Balls with radii in (s/3, s) centered on the grid (s/2)ℤ, covering ℝ.
/// Grid points next to atoms come first, then points over the diffuse part,
/// then the remaining grid in the order 0, h, -h, 2h, -2h, ...
Stream<AlmostDecidableBall> almost_decidable_cover(const MeasurePtr& mu, const Rational& s);

/// {∫T_k dμ}_k for the trapezoids T_k of (a, b); sup = μ((a, b)).
LowerReal mass_of_interval(const MeasurePtr& mu, const Rational& a, const Rational& b);

}  // namespace effconv
