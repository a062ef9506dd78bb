#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "effconv/convergence.hpp"
#include "effconv/measures.hpp"

namespace effconv {

/// A measure sequence together with what is known about its limit.
struct Family {
  std::string name;
  MeasureSeq seq;
  MeasurePtr limit;                  // null when the limit is not a computable measure
  PolyOracle oracle;                 // vague modulus for polygonal inputs
  std::optional<Modulus> total_mass_modulus;
  bool probability = false;          // every member has total mass 1
};

/// δ_{2^-n} → δ_0.
Family delta_shrink_family();
/// δ_n → 0 vaguely (not weakly).
Family delta_n_family();
/// (1/2)δ_0 + (1/2)δ_{1 + 2^-n} → (1/2)δ_0 + (1/2)δ_1.
Family mixture_family();
/// δ_{1 + 2^-n} → δ_1.
Family shifted_family();
/// μ_n = μ.
Family constant_family(MeasurePtr mu);

/// Smallest n0 >= 0 with n0 >= max supp p + 1 rounded up; raises
/// Error(Precondition) for unbounded support.
std::size_t support_index(const PolyFunc& p);

/// Index modulus for point masses moving by at most 2^-n·scale: n0 makes
/// Lip(p)·scale·2^-n < 2^-N.
PolyOracle lipschitz_oracle(const Rational& scale);

using Enumeration = std::function<std::size_t(std::size_t)>;

Enumeration identity_enumeration();
/// 1, 0, 3, 2, 5, 4, ...
Enumeration swap_pairs_enumeration();
/// The listed values, then the naturals not listed, in increasing order.
Enumeration listed_enumeration(std::vector<std::size_t> prefix);

/// μ_n = Σ_{i<=n} 2^-(a_i + 1) δ_i for an injective enumeration a.
struct Specker {
  Family family;  // limit set only for the identity enumeration
  /// The index ⌈max supp f⌉ + 1 beyond which ∫f dμ_n no longer changes.
  std::function<std::size_t(const SupportedFunc&)> modulus_index;
  /// μ_k(ℝ), k = 0, 1, ...: one enumeration query per term.
  LowerReal total_mass_lower = LowerReal::constant(Rational(0));
  /// Number of enumeration values read so far (the hidden oracle's counter).
  std::function<std::size_t()> oracle_queries;
};

/// Raises Error(DuplicateEnumeration) once a repeated value is read.
Specker specker_sequence(Enumeration a, bool identity_limit = false);

/// Looks up a builtin family by name: deltashrink, deltan, mixture,
/// shifted, specker. Raises Error(Parse) for unknown names.
Family builtin_family(const std::string& name);

}  // namespace effconv
