#pragma once

// Test-side oracles: deliberately naive, written without the library's
// algorithms so they can catch its mistakes.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "effconv/effective_functions.hpp"
#include "effconv/measures.hpp"
#include "effconv/rational.hpp"

namespace oracle {

using effconv::Atom;
using effconv::Extension;
using effconv::PolyFunc;
using effconv::Rational;
using effconv::Vertex;

// ---- random inputs ------------------------------------------------------------------

inline Rational random_rational(std::mt19937& rng, long lo, long hi, std::vector<long> dens = {1, 2, 3, 4, 8}) {
  const long q = dens[std::uniform_int_distribution<std::size_t>(0, dens.size() - 1)(rng)];
  const long p = std::uniform_int_distribution<long>(lo * q, hi * q)(rng);
  return Rational(p, q);
}

/// At most `max_atoms` atoms at rationals in [-4, 4], total weight <= 2.
inline std::vector<Atom> random_atoms(std::mt19937& rng, std::size_t max_atoms = 5) {
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, max_atoms)(rng);
  std::vector<Atom> atoms;
  Rational left(2);
  for (std::size_t i = 0; i < k && left.sign() > 0; ++i) {
    const long q = std::uniform_int_distribution<long>(1, 8)(rng);
    Rational w(std::uniform_int_distribution<long>(1, q)(rng), q);
    w = effconv::min(w, left);
    left -= w;
    atoms.push_back(Atom{random_rational(rng, -4, 4), w});
  }
  return atoms;
}

/// Zero-outside polygonal function with support inside [lo, hi].
inline PolyFunc random_supported_poly(std::mt19937& rng, long lo = -3, long hi = 3) {
  std::set<Rational> xs;
  const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
  while (xs.size() < k) xs.insert(random_rational(rng, lo, hi, {1, 2, 4}));
  std::vector<Vertex> vs;
  std::size_t i = 0;
  for (const auto& x : xs) {
    const bool end = i == 0 || i + 1 == xs.size();
    vs.push_back(Vertex{x, end ? Rational(0) : random_rational(rng, -2, 2, {1, 2, 4})});
    ++i;
  }
  return PolyFunc(std::move(vs), Extension::ZeroOutside);
}

// ---- evaluation and integration ----------------------------------------------------------

/// Linear interpolation written out directly.
inline Rational eval(const PolyFunc& p, const Rational& x) {
  const auto& v = p.vertices();
  if (x <= v.front().x) return p.extension() == Extension::ZeroOutside ? Rational(0) : v.front().y;
  if (x >= v.back().x) return p.extension() == Extension::ZeroOutside ? Rational(0) : v.back().y;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (x <= v[i].x) return v[i - 1].y + (v[i].y - v[i - 1].y) * (x - v[i - 1].x) / (v[i].x - v[i - 1].x);
  }
  return v.back().y;
}

inline Rational integrate_atoms(const PolyFunc& p, const std::vector<Atom>& atoms) {
  Rational s(0);
  for (const auto& a : atoms) s += a.weight * eval(p, a.location);
  return s;
}

/// sup |f - g| over [lo, hi] for polygonal f, g: attained at a breakpoint
/// of either or at an end.
inline Rational sup_distance(const PolyFunc& f, const PolyFunc& g, const Rational& lo, const Rational& hi) {
  std::set<Rational> xs{lo, hi};
  for (const auto& v : f.vertices()) {
    if (lo <= v.x && v.x <= hi) xs.insert(v.x);
  }
  for (const auto& v : g.vertices()) {
    if (lo <= v.x && v.x <= hi) xs.insert(v.x);
  }
  Rational d(0);
  for (const auto& x : xs) d = effconv::max(d, effconv::abs(eval(f, x) - eval(g, x)));
  return d;
}

// ---- Prokhorov distance by exhaustion ------------------------------------------------------

/// max over A ⊆ supp(from) of from(A) - to({y : d(y, A) <= r}) - r.
/// Nonpositive iff every ε slightly above r is valid in this direction.
inline Rational worst_excess(const std::vector<Atom>& from, const std::vector<Atom>& to, const Rational& r) {
  Rational worst(-1000);
  const std::size_t n = from.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    Rational mass(0), reach(0);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) mass += from[i].weight;
    }
    for (const auto& y : to) {
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i & 1) && effconv::abs(y.location - from[i].location) <= r) {
          reach += y.weight;
          break;
        }
      }
    }
    worst = effconv::max(worst, mass - reach - r);
  }
  return worst;
}

/// The Prokhorov distance of two finite atomic measures by enumerating every
/// test set of atoms. The infimum is either a pairwise distance or a value
/// μ(A) - ν(closed r-neighborhood of A) for some A and pairwise distance r;
/// the smallest candidate valid just above itself is the answer.
inline Rational prokhorov(const std::vector<Atom>& mu, const std::vector<Atom>& nu) {
  std::set<Rational> dists{Rational(0)};
  for (const auto& a : mu) {
    for (const auto& b : nu) dists.insert(effconv::abs(a.location - b.location));
  }
  std::set<Rational> cand(dists.begin(), dists.end());
  auto add_masses = [&](const std::vector<Atom>& from, const std::vector<Atom>& to) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << from.size()); ++mask) {
      for (const auto& r : dists) {
        Rational mass(0), reach(0);
        for (std::size_t i = 0; i < from.size(); ++i) {
          if (mask >> i & 1) mass += from[i].weight;
        }
        for (const auto& y : to) {
          for (std::size_t i = 0; i < from.size(); ++i) {
            if ((mask >> i & 1) && effconv::abs(y.location - from[i].location) <= r) {
              reach += y.weight;
              break;
            }
          }
        }
        if ((mass - reach).sign() > 0) cand.insert(mass - reach);
      }
    }
  };
  add_masses(mu, nu);
  add_masses(nu, mu);
  for (const auto& c : cand) {
    if (worst_excess(mu, nu, c).sign() <= 0 && worst_excess(nu, mu, c).sign() <= 0) return c;
  }
  return *cand.rbegin();
}

}  // namespace oracle
