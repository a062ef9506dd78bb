#include "effconv/effective_functions.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "effconv/error.hpp"

namespace effconv {

PolyFunc::PolyFunc(std::vector<Vertex> vertices, Extension extension)
    : vertices_(std::move(vertices)), extension_(extension) {
  if (vertices_.empty()) throw Error(ErrorKind::Precondition, "polygonal function needs a vertex");
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (!(vertices_[i - 1].x < vertices_[i].x))
      throw Error(ErrorKind::Precondition, "vertex abscissae must increase strictly");
  }
  if (extension_ == Extension::ZeroOutside && (!vertices_.front().y.is_zero() || !vertices_.back().y.is_zero()))
    throw Error(ErrorKind::Precondition, "zero-outside needs zero end values");
}

PolyFunc PolyFunc::constant(const Rational& c) { return PolyFunc({Vertex{Rational(0), c}}, Extension::ConstantExtend); }

Rational PolyFunc::eval(const Rational& x) const {
  // Zero-outside functions end at 0, so both extensions evaluate alike.
  if (x <= vertices_.front().x) return vertices_.front().y;
  if (x >= vertices_.back().x) return vertices_.back().y;
  const auto it = std::upper_bound(vertices_.begin(), vertices_.end(), x,
                                   [](const Rational& v, const Vertex& w) { return v < w.x; });
  const Vertex& b = *it;
  const Vertex& a = *(it - 1);
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

Rational poly_eval(const PolyFunc& p, const Rational& x) { return p.eval(x); }

std::pair<Rational, Rational> PolyFunc::range_on(const Rational& u, const Rational& v) const {
  if (v < u) throw Error(ErrorKind::Precondition, "range_on needs u <= v");
  Rational lo = eval(u);
  Rational hi = lo;
  auto take = [&](const Rational& y) {
    lo = min(lo, y);
    hi = max(hi, y);
  };
  take(eval(v));
  for (const auto& w : vertices_) {
    if (u < w.x && w.x < v) take(w.y);
  }
  return {lo, hi};
}

IntervalSet PolyFunc::support() const {
  std::vector<Span> spans;
  const Vertex& first = vertices_.front();
  const Vertex& last = vertices_.back();
  if (!first.y.is_zero()) spans.push_back(Span{std::nullopt, false, first.x, true});
  if (!last.y.is_zero()) spans.push_back(Span{last.x, true, std::nullopt, false});
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (!vertices_[i - 1].y.is_zero() || !vertices_[i].y.is_zero())
      spans.push_back(Span{vertices_[i - 1].x, true, vertices_[i].x, true});
  }
  return IntervalSet::from_spans(std::move(spans));
}

Rational PolyFunc::sup_abs() const {
  Rational m(0);
  for (const auto& w : vertices_) m = max(m, abs(w.y));
  return m;
}

Box decode_box(const BigInt& code) {
  const auto [a, b] = cantor_unpair(code);
  const IntervalCode i = IntervalCode::decode(a);
  const IntervalCode j = IntervalCode::decode(b);
  return Box{i.left(), i.right(), j.left(), j.right()};
}

namespace {

constexpr int kBoxScanPerLevel = 4;

bool sound(const PolyFunc& p, const Box& b) {
  const auto [lo, hi] = p.range_on(b.i_lo, b.i_hi);
  return b.j_lo < lo && hi < b.j_hi;
}

void push_level(const PolyFunc& p, long s, std::deque<Box>& out) {
  // J width <= 7/8·2^-s + 2^-(s+4) < 2^-s.
  const Rational eta = Rational::pow2(-(s + 5));
  const Rational target = Rational(7, 8) * Rational::pow2(-s);
  const auto& vs = p.vertices();
  const Rational far = Rational::pow2(s);
  out.push_back(Box{vs.front().x - far, vs.front().x, vs.front().y - eta, vs.front().y + eta});
  for (std::size_t k = 1; k < vs.size(); ++k) {
    const Rational variation = abs(vs[k].y - vs[k - 1].y);
    long d = 0;
    while (variation / Rational::pow2(d) > target) ++d;
    const long parts = 1L << d;
    const Rational step = (vs[k].x - vs[k - 1].x) / Rational(parts);
    const Rational dy = (vs[k].y - vs[k - 1].y) / Rational(parts);
    Rational u = vs[k - 1].x;
    Rational y0 = vs[k - 1].y;
    // In-place updates: the by-value Rational operators would copy each
    // operand, and this loop dominates the cost of reading a name.
    for (long j = 0; j < parts; ++j) {
      Rational u1 = u, y1 = y0;
      if (j + 1 == parts) {
        u1 = vs[k].x;
        y1 = vs[k].y;
      } else {
        u1 += step;
        y1 += dy;
      }
      Rational lo = min(y0, y1), hi = max(y0, y1);
      lo -= eta;
      hi += eta;
      out.push_back(Box{std::move(u), u1, std::move(lo), std::move(hi)});
      u = std::move(u1);
      y0 = std::move(y1);
    }
  }
  out.push_back(Box{vs.back().x, vs.back().x + far, vs.back().y - eta, vs.back().y + eta});
}

}  // namespace

CompactOpenName co_name_of_poly(const PolyFunc& p) {
  struct State {
    long level = 0;
    BigInt scan = 0;
    std::deque<Box> queue;
  };
  auto st = std::make_shared<State>();
  return CompactOpenName([p, st]() -> std::optional<Box> {
    if (st->queue.empty()) {
      push_level(p, st->level++, st->queue);
      for (int i = 0; i < kBoxScanPerLevel; ++i) {
        const Box b = decode_box(st->scan);
        st->scan += 1;
        if (sound(p, b)) st->queue.push_back(b);
      }
    }
    Box b = std::move(st->queue.front());
    st->queue.pop_front();
    return b;
  });
}

bool name_certifies(const CompactOpenName& name, const Rational& i_lo, const Rational& i_hi, const Rational& j_lo,
                    const Rational& j_hi, std::size_t pulls) {
  std::vector<Span> spans;
  name.visit(0, pulls, [&](const std::optional<Box>& b) {
    if (b && j_lo <= b->j_lo && b->j_hi <= j_hi) spans.push_back(Span{b->i_lo, true, b->i_hi, true});
  });
  return IntervalSet::from_spans(std::move(spans)).contains_closed_interval(i_lo, i_hi);
}

namespace detail {
struct PolygonalMemo {
  std::mutex mu;
  std::map<Rational, PolyFunc> by_err;
};
struct WindowMemo {
  std::mutex mu;
  std::map<std::tuple<Rational, Rational, Rational>, PolyFunc> by_window;
};
}  // namespace detail

std::shared_ptr<detail::PolygonalMemo> SupportedFunc::make_memo() {
  return std::make_shared<detail::PolygonalMemo>();
}

SupportedFunc supported_from_poly(const PolyFunc& p) {
  const IntervalSet supp = p.support();
  if (!supp.is_bounded()) throw Error(ErrorKind::Precondition, "support is unbounded");
  return SupportedFunc{co_name_of_poly(p), compact_from_set(supp)};
}

namespace {

// Partition [u, v] into segments each inside some box's I, listed by left
// end in `order`. A segment end lies in both neighbouring boxes' I, so f
// there lies in both J; the vertex takes the midpoint of J ∩ J'. On each
// segment ψ then stays inside that segment's J, as f does, and
// |f - ψ| < |J|.
std::optional<PolyFunc> sweep(const std::vector<const Box*>& boxes, const std::vector<std::size_t>& order,
                              const Rational& u, const Rational& v) {
  std::vector<const Box*> used;
  std::vector<Rational> ends{u};
  Rational x = u;
  std::size_t idx = 0;
  const Box* best = nullptr;
  while (true) {
    while (idx < order.size() && boxes[order[idx]]->i_lo <= x) {
      const Box* b = boxes[order[idx]];
      if (!best || b->i_hi > best->i_hi) best = b;
      ++idx;
    }
    if (!best || best->i_hi < x || (best->i_hi == x && x < v)) return std::nullopt;
    used.push_back(best);
    x = min(best->i_hi, v);
    ends.push_back(x);
    if (x == v) break;
  }
  std::vector<Vertex> out;
  out.reserve(ends.size());
  out.push_back(Vertex{u, midpoint(used.front()->j_lo, used.front()->j_hi)});
  for (std::size_t k = 1; k < used.size(); ++k) {
    const Box& a = *used[k - 1];
    const Box& b = *used[k];
    out.push_back(Vertex{ends[k], midpoint(max(a.j_lo, b.j_lo), min(a.j_hi, b.j_hi))});
  }
  if (v != u) out.push_back(Vertex{v, midpoint(used.back()->j_lo, used.back()->j_hi)});
  // Dropping vertices interior to straight runs leaves the function unchanged.
  std::vector<Vertex> lean;
  for (auto& p : out) {
    while (lean.size() >= 2) {
      const Vertex& a = lean[lean.size() - 2];
      const Vertex& b = lean.back();
      if ((b.y - a.y) * (p.x - a.x) != (p.y - a.y) * (b.x - a.x)) break;
      lean.pop_back();
    }
    lean.push_back(std::move(p));
  }
  return PolyFunc(std::move(lean), Extension::ConstantExtend);
}

}  // namespace

PolyFunc approx_on_interval(const CompactOpenName& name, const Rational& u, const Rational& v, const Rational& err,
                            std::size_t max_pulls) {
  if (v < u) throw Error(ErrorKind::Precondition, "approx_on_interval needs u <= v");
  if (err.sign() <= 0) throw Error(ErrorKind::Precondition, "err must be positive");
  const Rational& width = err;
  std::vector<const Box*> good;  // into the name's memo, which never moves
  std::vector<std::size_t> order;  // indices into good, sorted by left end
  std::size_t pulled = 0;
  std::size_t target = 256;
  auto by_left = [&](std::size_t a, std::size_t b) { return good[a]->i_lo < good[b]->i_lo; };
  while (true) {
    target = std::min(target, max_pulls);
    name.visit(pulled, target, [&](const std::optional<Box>& b) {
      if (b && b->j_hi - b->j_lo < width && b->i_hi >= u && b->i_lo <= v) good.push_back(&*b);
    });
    pulled = target;
    const std::size_t old = order.size();
    for (std::size_t i = old; i < good.size(); ++i) order.push_back(i);
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(old), order.end(), by_left);
    std::inplace_merge(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(old), order.end(), by_left);
    if (auto psi = sweep(good, order, u, v)) return *psi;
    if (pulled >= max_pulls)
      throw Error(ErrorKind::InsufficientNameProgress,
                  "boxes narrower than " + width.str() + " do not cover [" + u.str() + ", " + v.str() + "] within " +
                      std::to_string(max_pulls) + " pulls");
    target *= 2;
  }
}

namespace {

constexpr std::size_t kBoundPrecisionCap = 40;

// Rational strictly below min K (left) or above max K (right), inside
// (floor, min) resp. (max, ceil) whenever the name pins the floor/ceiling.
Rational outside_point(const CauchyReal& bound, bool left) {
  Rational lo, hi;
  for (std::size_t n = 2; n <= kBoundPrecisionCap; ++n) {
    const Rational q = bound.approx(n);
    const Rational e = Rational::pow2(1 - static_cast<long>(n));
    lo = q - e;
    hi = q + e;
    const bool no_integer = Rational(lo.floor()) == Rational(hi.floor()) && !lo.is_integer();
    if (no_integer) {
      return left ? midpoint(Rational(lo.floor()), lo) : midpoint(hi, Rational(hi.ceil()));
    }
  }
  // The extreme point is (numerically) an integer: step to the next unit cell.
  return left ? midpoint(Rational(lo.ceil()) - Rational(1), lo) : midpoint(hi, Rational(hi.floor()) + Rational(1));
}

}  // namespace

std::shared_ptr<detail::WindowMemo> make_window_memo() { return std::make_shared<detail::WindowMemo>(); }

PolyFunc approx_on_interval(const CompactOpenName& name, detail::WindowMemo& memo, const Rational& u,
                            const Rational& v, const Rational& err) {
  const auto key = std::make_tuple(u, v, err);
  {
    std::lock_guard<std::mutex> lock(memo.mu);
    if (const auto it = memo.by_window.find(key); it != memo.by_window.end()) return it->second;
  }
  PolyFunc p = approx_on_interval(name, u, v, err);
  std::lock_guard<std::mutex> lock(memo.mu);
  return memo.by_window.emplace(key, std::move(p)).first->second;
}

std::pair<Rational, Rational> polygonal_window(const SupportedFunc& f) {
  const auto [lo, hi] = compact_bounds(f.support);
  return {outside_point(lo, true), outside_point(hi, false)};
}

PolyFunc approx_polygonal(const SupportedFunc& f, const Rational& err, std::size_t max_pulls) {
  if (err.sign() <= 0) throw Error(ErrorKind::Precondition, "err must be positive");
  if (f.memo) {
    std::lock_guard<std::mutex> lock(f.memo->mu);
    if (auto it = f.memo->by_err.find(err); it != f.memo->by_err.end()) return it->second;
  }
  if (f.support.covers.at(0).empty()) return PolyFunc({Vertex{Rational(0), Rational(0)}}, Extension::ZeroOutside);
  const auto [p, q] = polygonal_window(f);
  // f(p) = f(q) = 0 lies in the end boxes' J, so pinning the end vertices
  // to 0 keeps ψ inside those J and the error below err.
  PolyFunc raw = approx_on_interval(f.name, p, q, err, max_pulls);
  std::vector<Vertex> vs = raw.vertices();
  vs.front().y = Rational(0);
  vs.back().y = Rational(0);
  PolyFunc psi(std::move(vs), Extension::ZeroOutside);
  if (f.memo) {
    std::lock_guard<std::mutex> lock(f.memo->mu);
    f.memo->by_err.emplace(err, psi);
  }
  return psi;
}

PolyFunc tent_function(const Rational& c, const Rational& d) {
  if (d < c) throw Error(ErrorKind::Precondition, "tent needs c <= d");
  std::vector<Vertex> vs{{c - Rational(1), Rational(0)}, {c, Rational(1)}};
  if (c < d) vs.push_back({d, Rational(1)});
  vs.push_back({d + Rational(1), Rational(0)});
  return PolyFunc(std::move(vs), Extension::ZeroOutside);
}

PolyFunc indicator_approx(const Rational& a, const Rational& b, unsigned k) {
  if (!(a < b)) throw Error(ErrorKind::MalformedInterval, "indicator needs a < b");
  const Rational h = Rational::pow2(-static_cast<long>(k)) * (b - a) / Rational(2);
  std::vector<Vertex> vs{{a, Rational(0)}, {a + h, Rational(1)}};
  if (a + h < b - h) vs.push_back({b - h, Rational(1)});
  vs.push_back({b, Rational(0)});
  return PolyFunc(std::move(vs), Extension::ZeroOutside);
}

}  // namespace effconv
