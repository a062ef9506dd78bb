#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>

#include "effconv/convergence.hpp"
#include "effconv/effective_sets.hpp"
#include "effconv/interval_set.hpp"
#include "effconv/measures.hpp"

namespace effconv {

/// ρ(μ, ν) = inf{ε > 0 : μ(A) <= ν(B(A, ε)) + ε and ν(A) <= μ(B(A, ε)) + ε
/// for all Borel A}, exactly, for finite discrete measures.
///
/// For a fixed ε the worst A has deficiency μ(ℝ) - (max flow from μ's atoms
/// to ν's atoms along pairs closer than ε); on the line that flow is found
/// greedily. The deficiency only changes just above pairwise distances, so
/// ρ is read off one of those breakpoints.
Rational prokhorov_discrete(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Whether ε satisfies both inequalities for every A (open neighborhoods).
/// The infimum itself need not be valid: ρ(δ_0, δ_1/2) = 1/2 is approached
/// only from above.
bool prokhorov_valid_at(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Rational& eps);

/// lower <= ρ(μ, ν) <= upper with upper - lower <= 2^-n. Densities are
/// replaced by midpoint atoms of cells of width 2^-(n+1), which moves every
/// unit of mass by at most half a cell.
std::pair<Rational, Rational> prokhorov_bounds(const Measure& mu, const Measure& nu, std::size_t n);

/// Modulus for μ_n(A) → μ(A), given the exact open set A (a finite union
/// of balls with μ-null spheres).
using AlmostDecidableModulus = std::function<Modulus(const IntervalSet&)>;

/// Windowed search with exact masses; for exact measure classes.
AlmostDecidableModulus exact_mass_modulus(const MeasureSeq& seq, const MeasurePtr& limit,
                                          const SearchParams& params = {});

/// ε(N) with ρ(μ_n, μ) < 2^-N for n >= ε(N): cover by almost decidable balls
/// of radius < 2^-(N+3), keep the first k0 that carry all but 2^-(N+2) of
/// μ(ℝ), and take the largest modulus index at precision N + 2 over all
/// unions of those balls. Raises Error(CoverSearchExhausted) when more than
/// `max_balls` balls are needed.
std::size_t eps_from_weak(const MeasureSeq& seq, const MeasurePtr& limit, const AlmostDecidableModulus& ad_modulus,
                          std::size_t N, std::size_t max_balls = 16);

/// Index beyond which μ_n(C) < r, or nullopt while r is not in the right cut
/// of μ(C) (for r <= μ(C) that is forever). C needs its exact geometry.
std::optional<std::size_t> witness_from_eps(const MeasurePtr& limit, const Modulus& eps, const PiSet& c,
                                            const Rational& r, std::size_t max_precision = 256);

}  // namespace effconv
