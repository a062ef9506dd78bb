#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "effconv/effective_sets.hpp"
#include "effconv/interval_set.hpp"
#include "effconv/rational.hpp"
#include "effconv/stream.hpp"

namespace effconv {

enum class Extension { ConstantExtend, ZeroOutside };

struct Vertex {
  Rational x;
  Rational y;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Piecewise-linear function with rational vertices.
class PolyFunc {
 public:
  /// Needs >= 1 vertex with strictly increasing x; ZeroOutside needs the
  /// first and last values to be 0. Raises Error(Precondition) otherwise.
  PolyFunc(std::vector<Vertex> vertices, Extension extension);

  static PolyFunc constant(const Rational& c);
  static PolyFunc zero() { return constant(Rational(0)); }

  Rational eval(const Rational& x) const;

  /// Exact (min, max) of the function over [u, v], u <= v.
  std::pair<Rational, Rational> range_on(const Rational& u, const Rational& v) const;

  /// closure of {x : p(x) != 0}.
  IntervalSet support() const;

  /// max |p| over the line.
  Rational sup_abs() const;

  const std::vector<Vertex>& vertices() const { return vertices_; }
  Extension extension() const { return extension_; }

  friend bool operator==(const PolyFunc&, const PolyFunc&) = default;

 private:
  std::vector<Vertex> vertices_;
  Extension extension_;
};

Rational poly_eval(const PolyFunc& p, const Rational& x);

/// (I, J) with I = [i_lo, i_hi] compact and J = (j_lo, j_hi) open; asserts
/// f[I] ⊆ J.
struct Box {
  Rational i_lo, i_hi;
  Rational j_lo, j_hi;
  friend bool operator==(const Box&, const Box&) = default;
};

/// Enumeration of boxes mapped correctly by a continuous function; empty
/// slots are padding.
using CompactOpenName = Stream<std::optional<Box>>;

/// Box addressed by a natural: z = <a, b> with I the closure of ball a and J
/// ball b.
Box decode_box(const BigInt& code);

/// Level s lists, for every linear piece, a subdivision whose boxes have J
/// at most 2^-s wide, two outer boxes of length 2^s for the extension, and a
/// few box codes in index order whose soundness is checked exactly.
CompactOpenName co_name_of_poly(const PolyFunc& p);

/// Whether the first `pulls` boxes with J' ⊆ J cover I, which certifies
/// f[I] ⊆ J.
bool name_certifies(const CompactOpenName& name, const Rational& i_lo, const Rational& i_hi,
                    const Rational& j_lo, const Rational& j_hi, std::size_t pulls);

namespace detail {
struct PolygonalMemo;
struct WindowMemo;
}

/// Continuous function with compact support, given by names. Copies share
/// a memo of the polygonal approximations already computed.
struct SupportedFunc {
  CompactOpenName name;
  CompactName support;
  std::shared_ptr<detail::PolygonalMemo> memo = make_memo();

  static std::shared_ptr<detail::PolygonalMemo> make_memo();
};

/// Names a polygonal function; its support must be bounded.
SupportedFunc supported_from_poly(const PolyFunc& p);

/// Polygonal ψ on [u, v] with sup |f - ψ| < err there, read from boxes with
/// J narrower than err. Reads at most `max_pulls` boxes and raises
/// Error(InsufficientNameProgress) if they do not cover [u, v]. The result
/// is constant-extended.
PolyFunc approx_on_interval(const CompactOpenName& name, const Rational& u, const Rational& v,
                            const Rational& err, std::size_t max_pulls = std::size_t{1} << 22);

/// Cache of approx_on_interval results keyed by (u, v, err), for callers
/// that ask for the same window repeatedly.
std::shared_ptr<detail::WindowMemo> make_window_memo();
PolyFunc approx_on_interval(const CompactOpenName& name, detail::WindowMemo& memo, const Rational& u,
                            const Rational& v, const Rational& err);

/// The rationals p < min supp f and q > max supp f used by approx_polygonal.
std::pair<Rational, Rational> polygonal_window(const SupportedFunc& f);

/// Zero-outside ψ with ψ(p) = ψ(q) = 0 for rationals p < min supp f and
/// q > max supp f, and sup |f - ψ| < err on [p, q]. p is the midpoint of
/// (floor(min supp f), min supp f) whenever that interval is nonempty and
/// certified from the support name; see README for the integer case.
PolyFunc approx_polygonal(const SupportedFunc& f, const Rational& err,
                          std::size_t max_pulls = std::size_t{1} << 22);

/// T = 1 on [c, d], ramps on [c - 1, c] and [d, d + 1], 0 elsewhere.
PolyFunc tent_function(const Rational& c, const Rational& d);

/// Trapezoid supported on [a, b] with plateau [a + h, b - h],
/// h = 2^-k (b - a)/2; increases with k to the indicator of (a, b).
PolyFunc indicator_approx(const Rational& a, const Rational& b, unsigned k);

}  // namespace effconv
