// effconv: command-line front end.
//
//   effconv prokhorov a.txt b.txt [--precision n]
//   effconv demo specker [--enum identity|swap-pairs|FILE] [--f NAME|FILE] [--N 0..8] [--fuel k] [--hidden K]
//   effconv verify MODE SEQ LIMIT [F] (--construct | --cert FILE) [--N 1..8] [--fuel k] [--out report.csv]
//
// Exit codes: 0 pass, 1 fail or other error, 2 divergence detected, 3 parse error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "effconv/convergence.hpp"
#include "effconv/error.hpp"
#include "effconv/families.hpp"
#include "effconv/prokhorov.hpp"
#include "effconv/text_format.hpp"

using namespace effconv;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kDivergence = 2;
constexpr int kParse = 3;

bool is_file(const std::string& s) { return std::ifstream(s).good(); }

MeasurePtr half_half(const Rational& a, const Rational& b) {
  return std::make_shared<DiscreteMeasure>(std::vector<Atom>{{a, Rational(1, 2)}, {b, Rational(1, 2)}});
}

MeasurePtr resolve_limit(const std::string& name, const Family& fam) {
  if (name == "delta0") return DiscreteMeasure::dirac(Rational(0));
  if (name == "delta1") return DiscreteMeasure::dirac(Rational(1));
  if (name == "zero") return DiscreteMeasure::zero();
  if (name == "mixture") return half_half(Rational(0), Rational(1));
  if (name == "family" || name == fam.name) {
    if (!fam.limit) throw Error(ErrorKind::Precondition, "family '" + fam.name + "' has no computable limit");
    return fam.limit;
  }
  if (!is_file(name)) throw Error(ErrorKind::Parse, "unknown limit '" + name + "'");
  return parse_measure(read_file(name)).measure;
}

PolyFunc resolve_function(const std::string& name) {
  using V = std::vector<Vertex>;
  if (name == "constant-one") return PolyFunc::constant(Rational(1));
  if (name == "hat") return PolyFunc(V{{Rational(-1), Rational(0)}, {Rational(0), Rational(1)}, {Rational(1), Rational(0)}},
                                     Extension::ZeroOutside);
  if (name == "hat52")
    return PolyFunc(V{{Rational(0), Rational(0)}, {Rational(5, 4), Rational(1)}, {Rational(5, 2), Rational(0)}},
                    Extension::ZeroOutside);
  if (name == "clamp")
    return PolyFunc(V{{Rational(-1), Rational(-1)}, {Rational(1), Rational(1)}}, Extension::ConstantExtend);
  if (name == "tent3") return tent_function(Rational(-2), Rational(2));
  if (name == "zero") return PolyFunc::zero();
  if (!is_file(name)) throw Error(ErrorKind::Parse, "unknown function '" + name + "'");
  return parse_polyfunc(read_file(name));
}

bool same_measure(const MeasurePtr& a, const MeasurePtr& b) {
  if (a == b) return true;
  const auto* da = dynamic_cast<const DiscreteMeasure*>(a.get());
  const auto* db = dynamic_cast<const DiscreteMeasure*>(b.get());
  if (!da || !db || da->is_lazy() || db->is_lazy() || da->atoms().size() != db->atoms().size()) return false;
  for (std::size_t i = 0; i < da->atoms().size(); ++i) {
    if (da->atoms()[i].location != db->atoms()[i].location || da->atoms()[i].weight != db->atoms()[i].weight)
      return false;
  }
  return true;
}

std::shared_ptr<const DiscreteMeasure> finite_discrete(const MeasurePtr& m) {
  auto d = std::dynamic_pointer_cast<const DiscreteMeasure>(m);
  return d && !d->is_lazy() ? d : nullptr;
}

Modulus table_modulus(std::map<std::size_t, std::size_t> table) {
  return [table = std::move(table)](std::size_t N) {
    const auto it = table.find(N);
    if (it == table.end()) throw Error(ErrorKind::Precondition, "certificate has no entry for N = " + std::to_string(N));
    return it->second;
  };
}

// Exact rows when the limit is exact, certified-approximation rows otherwise.
Verdict check_integrals(const MeasureSeq& seq, const MeasurePtr& limit, const PolyFunc& f, const Modulus& m,
                        const std::vector<std::size_t>& ns, Fuel fuel) {
  if (limit->exact()) {
    return check_modulus([&](std::size_t n) { return integrate_poly(f, *seq(n)); }, integrate_poly(f, *limit), m, ns,
                         fuel);
  }
  const CauchyReal lim = CauchyReal::from_terms([limit, f](std::size_t n) { return limit->integrate_approx(f, n + 1); });
  return check_modulus([&](std::size_t n) { return CauchyReal::constant(integrate_poly(f, *seq(n))); }, lim, m, ns,
                       fuel);
}

int report(const Verdict& v, const std::optional<std::string>& out) {
  const std::string csv = write_report_csv(v);
  std::cout << csv;
  if (out) {
    std::ofstream file(*out);
    if (!file) throw Error(ErrorKind::Parse, "cannot write '" + *out + "'");
    file << csv;
  }
  if (const auto bad = v.first_failure()) {
    std::cout << "# FAIL at N = " << bad->key << ", n = " << bad->checked_n << ": " << bad->quantity.str()
              << " >= " << bad->bound.str() << '\n';
    return kFail;
  }
  std::cout << "# PASS (" << v.rows.size() << " rows)\n";
  return kPass;
}

// ---- prokhorov -------------------------------------------------------------------------

int cmd_prokhorov(const std::vector<std::string>& files, std::size_t precision) {
  std::vector<std::string> paths = files;
  if (!paths.empty() && paths.front() == "dist") paths.erase(paths.begin());
  if (paths.size() != 2) throw Error(ErrorKind::Parse, "prokhorov needs exactly two measure files");
  const MeasurePtr a = parse_measure(read_file(paths[0])).measure;
  const MeasurePtr b = parse_measure(read_file(paths[1])).measure;
  const auto da = finite_discrete(a);
  const auto db = finite_discrete(b);
  if (da && db) {
    const Rational rho = prokhorov_discrete(*da, *db);
    std::cout << rho.str() << '\n' << rho.decimal(20) << '\n';
    return kPass;
  }
  const auto [lo, hi] = prokhorov_bounds(*a, *b, precision);
  std::cout << lo.str() << ' ' << hi.str() << '\n' << lo.decimal(20) << ' ' << hi.decimal(20) << '\n';
  return kPass;
}

// ---- demo specker ----------------------------------------------------------------------

struct DemoOptions {
  std::string enumeration = "identity";
  std::string f = "hat52";
  std::string ns = "0..8";
  std::size_t fuel = 8;
  std::size_t hidden = 0;
  std::optional<std::string> out;
};

Enumeration resolve_enumeration(const std::string& name) {
  if (name == "identity") return identity_enumeration();
  if (name == "swap-pairs") return swap_pairs_enumeration();
  if (!is_file(name)) throw Error(ErrorKind::Parse, "unknown enumeration '" + name + "'");
  return listed_enumeration(parse_enumeration(read_file(name)));
}

int cmd_demo_specker(const DemoOptions& o) {
  const Enumeration a = resolve_enumeration(o.enumeration);
  const PolyFunc f = resolve_function(o.f);
  const std::vector<std::size_t> ns = parse_index_list(o.ns);
  const Specker s = specker_sequence(a, o.enumeration == "identity");
  const std::size_t index = support_index(f);
  auto value = [&](std::size_t n) { return integrate_poly(f, *s.family.seq(n)); };

  std::cout << "# modulus index " << index << '\n';
  const std::size_t last = index + o.fuel;
  std::vector<Rational> values;
  for (std::size_t n = 0; n <= last; ++n) {
    values.push_back(value(n));
    std::cout << "# n = " << n << "  integral = " << values.back().str() << '\n';
  }
  std::size_t from = last;
  while (from > 0 && values[from - 1] == values[last]) --from;
  std::cout << "# constant from n = " << from << '\n';

  // Tolerance 0: every checked integral must equal the one at the index.
  Verdict v = check_modulus(value, values[index], constant_modulus(index), ns, Fuel{o.fuel});
  for (auto& row : v.rows) {
    if (!row.quantity.is_zero()) {
      row.pass = false;
      v.pass = false;
    }
  }

  if (o.hidden > 0) {
    // A fresh instance, so the query counter starts at zero.
    const Specker hidden = specker_sequence(a, false);
    Rational prev(-1);
    for (std::size_t k = 0; k < o.hidden; ++k) {
      const Rational lb = hidden.total_mass_lower.approx(Fuel{k});
      const bool up = lb > prev;
      std::cout << "# hidden: queries = " << hidden.oracle_queries() << "  lower bound = " << lb.str()
                << (up ? "" : "  (not increasing)") << '\n';
      if (!up) v.pass = false;
      prev = lb;
    }
  }
  const int code = report(v, o.out);
  return code;
}

// ---- verify ----------------------------------------------------------------------------

struct VerifyOptions {
  std::string mode, seq, limit, f;
  bool construct = false;
  bool uniformize = false;
  std::optional<std::string> cert;
  std::string ns = "1..8";
  std::size_t fuel = 20;
  std::optional<std::string> out;
  std::string set = "0:1";
  std::string rs;
  std::optional<std::size_t> tm_truncate;
};

IntervalSet parse_closed(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::Parse, "expected lo:hi, got '" + text + "'");
  const Rational lo = Rational::parse(text.substr(0, colon));
  const Rational hi = Rational::parse(text.substr(colon + 1));
  return IntervalSet::closed(lo, hi);
}

std::vector<Rational> parse_rationals(const std::string& text) {
  std::vector<Rational> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(Rational::parse(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

int cmd_verify(const VerifyOptions& o) {
  if (!o.construct && !o.cert) throw Error(ErrorKind::Parse, "verify needs --construct or --cert FILE");
  const Family fam = builtin_family(o.seq);
  const MeasurePtr limit = resolve_limit(o.limit, fam);
  const std::vector<std::size_t> ns = parse_index_list(o.ns);
  const Fuel fuel{o.fuel};
  const bool canonical = fam.limit && same_measure(limit, fam.limit);
  const PolyOracle oracle = canonical ? fam.oracle : exact_poly_oracle(fam.seq, limit);
  const std::string fname = o.f.empty() ? (o.mode == "vague" ? "tent3" : "constant-one") : o.f;

  if (o.mode == "weak" || o.mode == "vague") {
    const PolyFunc f = resolve_function(fname);
    Modulus m;
    if (!o.construct) {
      m = table_modulus(parse_modulus(read_file(*o.cert)));
    } else if (o.mode == "weak") {
      m = weak_modulus(fam.seq, limit, BoundedFunc{co_name_of_poly(f), f.sup_abs()});
    } else if (o.uniformize) {
      const SupportedFunc sf = supported_from_poly(f);
      m = [&fam, &oracle, sf](std::size_t N) { return uniformize_vague(fam.seq, oracle, sf, N); };
    } else {
      m = oracle(f);
    }
    return report(check_integrals(fam.seq, limit, f, m, ns, fuel), o.out);
  }

  if (o.mode == "eps") {
    Modulus eps;
    if (o.construct) {
      const AlmostDecidableModulus adm = exact_mass_modulus(fam.seq, limit);
      eps = [&fam, limit, adm](std::size_t N) { return eps_from_weak(fam.seq, limit, adm, N); };
    } else {
      eps = table_modulus(parse_modulus(read_file(*o.cert)));
    }
    const auto lim = finite_discrete(limit);
    Verdict v;
    for (const std::size_t N : ns) {
      const std::size_t n0 = eps(N);
      for (std::size_t n = n0; n <= n0 + fuel.budget; ++n) {
        const MeasurePtr mn = fam.seq(n);
        const auto dn = finite_discrete(mn);
        // Exact distance when both sides are finite discrete, else the certified upper bound.
        const Rational rho = lim && dn ? prokhorov_discrete(*dn, *lim) : prokhorov_bounds(*mn, *limit, N + 4).second;
        CheckRow row{std::to_string(N), n0, n, rho, Rational::pow2(-static_cast<long>(N)), true};
        row.pass = row.quantity < row.bound;
        v.pass = v.pass && row.pass;
        v.rows.push_back(std::move(row));
      }
    }
    return report(v, o.out);
  }

  if (o.mode == "witness") {
    const IntervalSet c = parse_closed(o.set);
    const Rational mu_c = limit->mass(c);
    std::vector<Rational> samples;
    if (!o.rs.empty()) {
      samples = parse_rationals(o.rs);
    } else {
      for (long k = 1; k <= 5; ++k) {
        samples.push_back(mu_c + Rational::pow2(-k));
        samples.push_back(mu_c - Rational::pow2(-k));
      }
    }
    Witness g;
    if (o.construct) {
      const AlmostDecidableModulus adm = exact_mass_modulus(fam.seq, limit);
      const Modulus eps = [&fam, limit, adm](std::size_t N) { return eps_from_weak(fam.seq, limit, adm, N); };
      const PiSet cs = pi_from_set(c);
      g = [limit, eps, cs](const Rational& r) { return witness_from_eps(limit, eps, cs, r); };
    } else {
      const auto table = parse_witness(read_file(*o.cert));
      g = [table](const Rational& r) -> std::optional<std::size_t> {
        const auto it = table.find(r);
        return it == table.end() ? std::nullopt : std::optional<std::size_t>(it->second);
      };
    }
    return report(portmanteau_check(fam.seq, limit, PortmanteauMode::ClosedLimsup, c, g, samples, fuel), o.out);
  }

  if (o.mode == "vague-to-weak") {
    const PolyFunc f = resolve_function(fname);
    const BoundedFunc bf{co_name_of_poly(f), f.sup_abs()};
    Modulus tm;
    CauchyReal total = limit->total_mass();
    if (o.tm_truncate) {
      const std::size_t k = *o.tm_truncate;
      tm = constant_modulus(k);
      total = fam.seq(k)->total_mass();
    } else if (fam.total_mass_modulus && canonical) {
      tm = *fam.total_mass_modulus;
    } else {
      tm = total_mass_modulus_search(fam.seq, limit);
    }
    if (!o.construct) throw Error(ErrorKind::Parse, "vague-to-weak validates constructed moduli only; pass --construct");
    const CheckedWeak cw = vague_to_weak_checked(fam.seq, total, tm, oracle, bf, ns, fuel);
    if (!cw.tm_ok) {
      std::cout << "# total-mass modulus rejected\n";
      report(cw.tm_verdict, o.out);
      return kFail;
    }
    std::map<std::size_t, std::size_t> table;
    for (std::size_t i = 0; i < ns.size(); ++i) table[ns[i]] = cw.moduli[i];
    return report(check_integrals(fam.seq, limit, f, table_modulus(table), ns, fuel), o.out);
  }

  throw Error(ErrorKind::Parse, "unknown verify mode '" + o.mode + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective convergence of measures on the real line"};
  app.require_subcommand(1);

  std::vector<std::string> pfiles;
  std::size_t precision = 10;
  auto* prok = app.add_subcommand("prokhorov", "Prokhorov distance between two measure files");
  prok->add_option("files", pfiles, "[dist] A B")->required();
  prok->add_option("--precision", precision, "bound width 2^-n for non-discrete inputs");

  DemoOptions demo;
  auto* dem = app.add_subcommand("demo", "Demonstrations");
  dem->require_subcommand(1);
  auto* spk = dem->add_subcommand("specker", "Specker sequence with an incomputable vague limit");
  spk->add_option("--enum", demo.enumeration, "identity, swap-pairs, or an enumeration file");
  spk->add_option("--f", demo.f, "builtin function name or polyfunc file");
  spk->add_option("--N", demo.ns, "precisions, e.g. 0..8 or 1,3,5");
  spk->add_option("--fuel", demo.fuel, "indices checked past the modulus");
  spk->add_option("--hidden", demo.hidden, "show K total-mass lower bounds read through the hidden oracle");
  spk->add_option("--out", demo.out, "write the report as CSV");

  VerifyOptions ver;
  auto* vrf = app.add_subcommand("verify", "Construct or check convergence certificates");
  vrf->add_option("mode", ver.mode, "weak, vague, eps, witness, vague-to-weak")->required();
  vrf->add_option("seq", ver.seq, "deltashrink, deltan, mixture, shifted, specker")->required();
  vrf->add_option("limit", ver.limit, "delta0, delta1, zero, mixture, family, or a measure file")->required();
  vrf->add_option("f", ver.f, "constant-one, hat, hat52, clamp, tent3, zero, or a polyfunc file");
  vrf->add_flag("--construct", ver.construct, "build the certificate, then validate it");
  vrf->add_option("--cert", ver.cert, "modulus or witness file to validate");
  vrf->add_flag("--uniformize", ver.uniformize, "vague: use the uniformizer instead of the polygonal oracle");
  vrf->add_option("--N", ver.ns, "precisions, e.g. 1..8");
  vrf->add_option("--fuel", ver.fuel, "indices checked past each certificate value");
  vrf->add_option("--out", ver.out, "write the report as CSV");
  vrf->add_option("--set", ver.set, "witness: closed interval lo:hi");
  vrf->add_option("--r", ver.rs, "witness: comma-separated rationals");
  vrf->add_option("--tm-truncate", ver.tm_truncate, "vague-to-weak: use tm(N) = K and μ_K(ℝ) as total mass");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParse;
  }

  try {
    if (prok->parsed()) return cmd_prokhorov(pfiles, precision);
    if (spk->parsed()) return cmd_demo_specker(demo);
    if (vrf->parsed()) return cmd_verify(ver);
  } catch (const Error& e) {
    std::cerr << "effconv: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::DivergenceDetected:
        std::cerr << "divergence detected\n";
        return kDivergence;
      case ErrorKind::Parse:
      case ErrorKind::DuplicateEnumeration:
        return kParse;
      default:
        return kFail;
    }
  }
  return kFail;
}
