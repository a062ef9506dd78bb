#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "effconv/effective_functions.hpp"
#include "effconv/exact_reals.hpp"
#include "effconv/interval_set.hpp"
#include "effconv/measures.hpp"
#include "effconv/rational.hpp"

namespace effconv {

using MeasureSeq = std::function<MeasurePtr(std::size_t)>;

/// Precision exponent N ↦ index n0 with |a_n - a| < 2^-N for all n >= n0.
using Modulus = std::function<std::size_t(std::size_t)>;

/// Partial map r ↦ index; nullopt means r is outside the domain.
using Witness = std::function<std::optional<std::size_t>(const Rational&)>;

/// A vague modulus procedure restricted to polygonal inputs.
using PolyOracle = std::function<Modulus(const PolyFunc&)>;

Modulus constant_modulus(std::size_t n0);

// ---- certificate checking ----------------------------------------------------

struct CheckRow {
  std::string key;                  // the precision N, or the rational r for witnesses
  std::optional<std::size_t> index;  // certificate value; nullopt = undefined
  std::size_t checked_n = 0;
  Rational quantity;                // |a_n - a|, or a_n for witnesses
  Rational bound;                   // 2^-N, or r
  bool pass = true;
};

struct Verdict {
  bool pass = true;
  std::vector<CheckRow> rows;
  std::optional<CheckRow> first_failure() const;
};

/// Checks n >= m(N) ⇒ |a_n - a| < 2^-N for n in [m(N), m(N) + fuel], exactly.
Verdict check_modulus(const std::function<Rational(std::size_t)>& seq, const Rational& limit, const Modulus& m,
                      const std::vector<std::size_t>& ns, Fuel fuel);

/// Same for computable reals: a sample passes only once the inequality is
/// certified from approximations.
Verdict check_modulus(const std::function<CauchyReal(std::size_t)>& seq, const CauchyReal& limit, const Modulus& m,
                      const std::vector<std::size_t>& ns, Fuel fuel);

// ---- constructing moduli by search ---------------------------------------------

/// Search bounds for the windowed modulus search: indices up to
/// `horizon + window` are inspected, and a candidate n0 <= horizon must be
/// certified on all of [n0, horizon + window].
struct SearchParams {
  std::size_t horizon = 64;
  std::size_t window = 48;
};

/// Windowed search over values known to within `slack` of a_n and a.
/// Raises Error(DivergenceDetected) when every value past the horizon is
/// certified at least 2^-N away from the limit, else Error(SearchExhausted).
std::size_t search_modulus(const std::function<Rational(std::size_t)>& approx_at, const Rational& limit_approx,
                           const Rational& slack, std::size_t N, const SearchParams& params);

Modulus weak_modulus(const MeasureSeq& seq, const MeasurePtr& limit, const BoundedFunc& f,
                     const SearchParams& params = {});
Modulus vague_modulus(const MeasureSeq& seq, const MeasurePtr& limit, const SupportedFunc& f,
                      const SearchParams& params = {});

/// Windowed search with exact polygonal integrals (exact measure classes).
PolyOracle exact_poly_oracle(const MeasureSeq& seq, const MeasurePtr& limit, const SearchParams& params = {});

/// Modulus for {μ_n(ℝ)} found by the same search.
Modulus total_mass_modulus_search(const MeasureSeq& seq, const MeasurePtr& limit, const SearchParams& params = {});

// ---- converters -------------------------------------------------------------------

/// The three error terms of the uniformizer and of vague_to_weak:
/// 2^-(N+2) + 2^-(N+1) + 2^-(N+2), which sum to 2^-N.
std::array<Rational, 3> uniformizer_budget(std::size_t N);

struct UniformizeTrace {
  Rational i_lo, i_hi;  // the interval I
  std::size_t n0 = 0;   // tent index
  Rational err;         // polygonal approximation error
  PolyFunc psi = PolyFunc::zero();
  std::size_t n1 = 0;   // oracle index for ψ
  std::size_t G = 0;
};

/// Vague modulus for an arbitrary compactly supported f from a modulus
/// procedure for polygonal inputs.
UniformizeTrace uniformize_vague_trace(const MeasureSeq& seq, const PolyOracle& oracle, const SupportedFunc& f,
                                       std::size_t N);
std::size_t uniformize_vague(const MeasureSeq& seq, const PolyOracle& oracle, const SupportedFunc& f, std::size_t N);

/// max(g1(N + 1), g2(N + 1)): modulus for {∫(1 - f) dμ_n} when 0 <= f <= 1.
std::size_t complement_modulus(const Modulus& g1, const Modulus& g2, std::size_t N);

struct TailBound {
  std::size_t a = 0;
  std::size_t n0 = 0;
};

/// a and n0 with μ_n(ℝ \ [-a, a]) < 2^-N for n >= n0, found by comparing
/// total masses with ∫T dμ_n for T = 1 on [-(a - 1), a - 1], supp T = [-a, a].
TailBound tail_mass_bound(const MeasureSeq& seq, const Modulus& tm, const PolyOracle& oracle, std::size_t N,
                          std::size_t max_a = 4096);

struct Surrogate {
  std::size_t a = 0;   // supp ψ ⊆ [-a, a]
  std::size_t n1 = 0;  // |∫(f - ψ) dμ_n| < 2^-N for n >= n1, and for the limit
  PolyFunc psi = PolyFunc::zero();
};

Surrogate polygonal_surrogate(const MeasureSeq& seq, const Modulus& tm, const PolyOracle& oracle, const BoundedFunc& f,
                              std::size_t N);

/// Weak modulus index for a bounded f from a vague oracle and a total-mass
/// modulus.
std::size_t vague_to_weak(const MeasureSeq& seq, const Modulus& tm, const PolyOracle& oracle, const BoundedFunc& f,
                          std::size_t N);

struct CheckedWeak {
  bool tm_ok = true;
  Verdict tm_verdict;
  std::vector<std::size_t> moduli;  // one per requested N, when tm_ok
};

/// Validates tm against the sequence of total masses before using it, so a
/// broken tm is reported instead of producing unchecked moduli.
CheckedWeak vague_to_weak_checked(const MeasureSeq& seq, const CauchyReal& limit_total, const Modulus& tm,
                                  const PolyOracle& oracle, const BoundedFunc& f, const std::vector<std::size_t>& ns,
                                  Fuel fuel);

/// The vague limit as a measure: open masses are enumerated from
/// oracle-certified values of ∫T_k dμ; integrals of compactly supported
/// polygonal functions come from the oracle.
MeasurePtr limit_from_vague(const MeasureSeq& seq, const PolyOracle& oracle, const CauchyReal& total_mass);

// ---- portmanteau certificates ------------------------------------------------------

enum class PortmanteauMode { ClosedLimsup, OpenLiminf, AlmostDecidable };

/// Validates a witness for limsup μ_n(C) <= μ(C) (C closed) or
/// liminf μ_n(U) >= μ(U) (U open) at the sampled rationals, with exact
/// masses on [g(r), g(r) + fuel].
Verdict portmanteau_check(const MeasureSeq& seq, const MeasurePtr& limit, PortmanteauMode mode,
                          const IntervalSet& target, const Witness& g, const std::vector<Rational>& samples, Fuel fuel);

/// Validates a modulus for μ_n(A) → μ(A), A almost decidable (its boundary
/// is μ-null); target is the exact shape of A.
Verdict portmanteau_check(const MeasureSeq& seq, const MeasurePtr& limit, const IntervalSet& target,
                          const Modulus& m, const std::vector<std::size_t>& ns, Fuel fuel);

}  // namespace effconv
