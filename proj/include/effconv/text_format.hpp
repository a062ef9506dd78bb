#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "effconv/convergence.hpp"
#include "effconv/effective_functions.hpp"
#include "effconv/measures.hpp"

// Plain-text formats shared by the CLI and the tests. Every format starts
// with a header line; '#' starts a comment; blank lines are ignored.
// Rationals are written `p/q` in lowest terms (integers as `p/1`) and read
// as `p/q` or `p`. Errors are Error(Parse) with the offending line number.
//
//   discrete                  polydensity          polyfunc zero-outside
//   atom 0/1 1/2              0/1 1/1              -1/1 0/1
//   atom 1/1 1/2              1/1 1/1              0/1 1/1
//   tailbound 0/1                                  1/1 0/1
//
//   modulus                   witness              enumeration
//   0 3                       3/2 0                1
//   1 4                       5/4 2                0

namespace effconv {

struct MeasureFile {
  MeasurePtr measure;
  /// Declared bound on mass beyond the listed atoms (discrete only).
  std::optional<Rational> tailbound;
};

MeasureFile parse_measure(std::string_view text);
std::string write_measure(const Measure& m, const std::optional<Rational>& tailbound = std::nullopt);

PolyFunc parse_polyfunc(std::string_view text);
std::string write_polyfunc(const PolyFunc& p);

/// `modulus` table; precisions not listed are outside the certificate.
std::map<std::size_t, std::size_t> parse_modulus(std::string_view text);
std::string write_modulus(const std::map<std::size_t, std::size_t>& table);

/// `witness` table; rationals not listed are outside the domain.
std::map<Rational, std::size_t> parse_witness(std::string_view text);
std::string write_witness(const std::map<Rational, std::size_t>& table);

/// `enumeration` list of naturals. Raises Error(DuplicateEnumeration) naming
/// the line of a repeated value.
std::vector<std::size_t> parse_enumeration(std::string_view text);

/// `N,index,checked_n,quantity,bound,pass` rows.
std::string write_report_csv(const Verdict& v);

/// "1..8" or "1,3,5" or "4".
std::vector<std::size_t> parse_index_list(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace effconv
