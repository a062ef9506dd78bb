#include "effconv/convergence.hpp"

#include <algorithm>
#include <memory>

#include "effconv/error.hpp"

namespace effconv {

Modulus constant_modulus(std::size_t n0) {
  return [n0](std::size_t) { return n0; };
}

std::optional<CheckRow> Verdict::first_failure() const {
  for (const auto& r : rows) {
    if (!r.pass) return r;
  }
  return std::nullopt;
}

namespace {

Rational bound_for(std::size_t N) { return Rational::pow2(-static_cast<long>(N)); }

// Certified bounds on masses and integrals of a single measure.
Rational total_upper(const Measure& mu, std::size_t k) {
  if (mu.exact()) return mu.mass(IntervalSet::whole_line());
  return mu.total_mass().approx(k) + Rational::pow2(1 - static_cast<long>(k));
}

Rational integral_lower(const Measure& mu, const PolyFunc& p, std::size_t k) {
  if (mu.exact()) return mu.integrate(p);
  return mu.integrate_approx(p, k) - Rational::pow2(-static_cast<long>(k));
}

Rational integral_upper(const Measure& mu, const PolyFunc& p, std::size_t k) {
  if (mu.exact()) return mu.integrate(p);
  return mu.integrate_approx(p, k) + Rational::pow2(-static_cast<long>(k));
}

}  // namespace

Verdict check_modulus(const std::function<Rational(std::size_t)>& seq, const Rational& limit, const Modulus& m,
                      const std::vector<std::size_t>& ns, Fuel fuel) {
  Verdict v;
  for (const std::size_t N : ns) {
    const std::size_t n0 = m(N);
    for (std::size_t n = n0; n <= n0 + fuel.budget; ++n) {
      CheckRow row{std::to_string(N), n0, n, abs(seq(n) - limit), bound_for(N), true};
      row.pass = row.quantity < row.bound;
      v.pass = v.pass && row.pass;
      v.rows.push_back(std::move(row));
    }
  }
  return v;
}

Verdict check_modulus(const std::function<CauchyReal(std::size_t)>& seq, const CauchyReal& limit, const Modulus& m,
                      const std::vector<std::size_t>& ns, Fuel fuel) {
  Verdict v;
  for (const std::size_t N : ns) {
    const std::size_t n0 = m(N);
    const Rational b = bound_for(N);
    for (std::size_t n = n0; n <= n0 + fuel.budget; ++n) {
      const CauchyReal a = seq(n);
      CheckRow row{std::to_string(N), n0, n, Rational(0), b, false};
      for (std::size_t p = N + 2; p <= N + 64; p += 2) {
        const Rational d = abs(a.approx(p) - limit.approx(p));
        const Rational e = Rational::pow2(2 - static_cast<long>(p));
        row.quantity = d;
        if (d + e < b) {
          row.pass = true;
          break;
        }
        if (d - e >= b) break;
      }
      v.pass = v.pass && row.pass;
      v.rows.push_back(std::move(row));
    }
  }
  return v;
}

std::size_t search_modulus(const std::function<Rational(std::size_t)>& approx_at, const Rational& limit_approx,
                           const Rational& slack, std::size_t N, const SearchParams& params) {
  const Rational b = bound_for(N);
  const std::size_t last = params.horizon + params.window;
  std::vector<std::optional<Rational>> dist(last + 1);
  // Walk down from the end of the window; the candidate is one past the
  // last index that is not certified close.
  std::size_t n0 = 0;
  for (std::size_t i = last + 1; i-- > 0;) {
    dist[i] = abs(approx_at(i) - limit_approx);
    if (!(*dist[i] + slack < b)) {
      n0 = i + 1;
      break;
    }
  }
  if (n0 <= params.horizon) return n0;
  // Divergence: every index past the horizon is certified outside the band.
  bool outside = true;
  for (std::size_t i = params.horizon + 1; i <= last && outside; ++i) {
    if (!dist[i]) dist[i] = abs(approx_at(i) - limit_approx);
    outside = *dist[i] - slack >= b;
  }
  if (outside)
    throw Error(ErrorKind::DivergenceDetected, "|a_n - a| >= 2^-" + std::to_string(N) + " for every n in (" +
                                                   std::to_string(params.horizon) + ", " + std::to_string(last) + "]");
  throw Error(ErrorKind::SearchExhausted, "no index within the horizon is certified for N = " + std::to_string(N));
}

Modulus weak_modulus(const MeasureSeq& seq, const MeasurePtr& limit, const BoundedFunc& f, const SearchParams& params) {
  return [seq, limit, f, params](std::size_t N) {
    const Rational l = integrate_named(f, *limit, N + 3);
    return search_modulus([&](std::size_t n) { return integrate_named(f, *seq(n), N + 3); }, l,
                          Rational::pow2(-static_cast<long>(N) - 2), N, params);
  };
}

Modulus vague_modulus(const MeasureSeq& seq, const MeasurePtr& limit, const SupportedFunc& f,
                      const SearchParams& params) {
  return [seq, limit, f, params](std::size_t N) {
    const Rational l = integrate_named(f, *limit, N + 3);
    return search_modulus([&](std::size_t n) { return integrate_named(f, *seq(n), N + 3); }, l,
                          Rational::pow2(-static_cast<long>(N) - 2), N, params);
  };
}

PolyOracle exact_poly_oracle(const MeasureSeq& seq, const MeasurePtr& limit, const SearchParams& params) {
  return [seq, limit, params](const PolyFunc& p) -> Modulus {
    return [seq, limit, params, p](std::size_t N) {
      return search_modulus([&](std::size_t n) { return seq(n)->integrate(p); }, limit->integrate(p), Rational(0), N,
                            params);
    };
  };
}

Modulus total_mass_modulus_search(const MeasureSeq& seq, const MeasurePtr& limit, const SearchParams& params) {
  return [seq, limit, params](std::size_t N) {
    const IntervalSet line = IntervalSet::whole_line();
    if (limit->exact() && seq(0)->exact()) {
      return search_modulus([&](std::size_t n) { return seq(n)->mass(line); }, limit->mass(line), Rational(0), N,
                            params);
    }
    const std::size_t k = N + 4;
    return search_modulus([&](std::size_t n) { return seq(n)->total_mass().approx(k); },
                          limit->total_mass().approx(k), Rational::pow2(-static_cast<long>(N) - 2), N, params);
  };
}

std::array<Rational, 3> uniformizer_budget(std::size_t N) {
  const long n = static_cast<long>(N);
  return {Rational::pow2(-(n + 2)), Rational::pow2(-(n + 1)), Rational::pow2(-(n + 2))};
}

UniformizeTrace uniformize_vague_trace(const MeasureSeq& seq, const PolyOracle& oracle, const SupportedFunc& f,
                                       std::size_t N) {
  UniformizeTrace tr;
  if (f.support.covers.at(0).empty()) return tr;  // f = 0
  const auto [p, q] = polygonal_window(f);
  tr.i_lo = Rational(p.floor());
  tr.i_hi = Rational(q.ceil());
  const PolyFunc tent = tent_function(tr.i_lo, tr.i_hi);
  tr.n0 = oracle(tent)(1);
  // For n >= n0 both ∫T dμ_n and ∫T dμ stay below ∫T dμ_{n0} + 1.
  const Rational tent_mass = integral_upper(*seq(tr.n0), tent, 4);
  tr.err = pow2_at_most(Rational::pow2(-static_cast<long>(N) - 2) / (Rational(1) + tent_mass));
  tr.psi = approx_polygonal(f, tr.err);
  tr.n1 = oracle(tr.psi)(N + 1);
  tr.G = std::max(tr.n0, tr.n1);
  return tr;
}

std::size_t uniformize_vague(const MeasureSeq& seq, const PolyOracle& oracle, const SupportedFunc& f, std::size_t N) {
  return uniformize_vague_trace(seq, oracle, f, N).G;
}

std::size_t complement_modulus(const Modulus& g1, const Modulus& g2, std::size_t N) {
  return std::max(g1(N + 1), g2(N + 1));
}

TailBound tail_mass_bound(const MeasureSeq& seq, const Modulus& tm, const PolyOracle& oracle, std::size_t N,
                          std::size_t max_a) {
  const long n = static_cast<long>(N);
  const std::size_t m_total = tm(N + 3);
  const Rational total = total_upper(*seq(m_total), N + 6);
  for (std::size_t a = 1; a <= max_a; ++a) {
    const Rational inner(static_cast<long>(a) - 1);
    const PolyFunc tent = tent_function(-inner, inner);
    const Modulus g = oracle(tent);
    // μ(ℝ) - ∫T dμ <= estimate + 2^-(N+2), and for n >= n0 each of μ_n(ℝ),
    // ∫T dμ_n moves by less than 2^-(N+2).
    const Rational estimate = total - integral_lower(*seq(g(N + 3)), tent, N + 6);
    if (estimate <= Rational::pow2(-(n + 2))) return TailBound{a, std::max(g(N + 2), tm(N + 2))};
  }
  throw Error(ErrorKind::SearchExhausted, "no a <= " + std::to_string(max_a) + " bounds the tail below 2^-" +
                                              std::to_string(N));
}

Surrogate polygonal_surrogate(const MeasureSeq& seq, const Modulus& tm, const PolyOracle& oracle, const BoundedFunc& f,
                              std::size_t N) {
  if (f.bound.sign() < 0) throw Error(ErrorKind::Precondition, "bound must be nonnegative");
  const Rational charge = Rational(2) * f.bound + Rational(1);
  const std::size_t t = N + 1 + static_cast<std::size_t>(ceil_log2(charge));
  const TailBound tb = tail_mass_bound(seq, tm, oracle, t);
  // n >= tm(0) keeps μ_n(ℝ) below μ_{tm(0)}(ℝ) + 2.
  const std::size_t m0 = tm(0);
  const Rational mass_cap = total_upper(*seq(m0), 4) + Rational(2);
  const Rational err = pow2_at_most(Rational::pow2(-static_cast<long>(N) - 1) / (mass_cap + Rational(1)));
  const Rational a(static_cast<long>(tb.a));
  const PolyFunc core = approx_on_interval(f.name, *f.memo, -a, a, min(err, Rational(1)));
  std::vector<Vertex> vs{{-a - Rational(1), Rational(0)}};
  for (const auto& v : core.vertices()) vs.push_back(v);
  vs.push_back({a + Rational(1), Rational(0)});
  return Surrogate{tb.a + 1, std::max(tb.n0, m0), PolyFunc(std::move(vs), Extension::ZeroOutside)};
}

std::size_t vague_to_weak(const MeasureSeq& seq, const Modulus& tm, const PolyOracle& oracle, const BoundedFunc& f,
                          std::size_t N) {
  const Surrogate s = polygonal_surrogate(seq, tm, oracle, f, N + 2);
  const std::size_t n2 = oracle(s.psi)(N + 1);
  return std::max(s.n1, n2);
}

CheckedWeak vague_to_weak_checked(const MeasureSeq& seq, const CauchyReal& limit_total, const Modulus& tm,
                                  const PolyOracle& oracle, const BoundedFunc& f, const std::vector<std::size_t>& ns,
                                  Fuel fuel) {
  CheckedWeak out;
  const std::size_t top = ns.empty() ? 0 : *std::max_element(ns.begin(), ns.end());
  // Precisions at which tm is consulted: up to (N + 2) + 1 + log(2B + 1) + 3.
  const std::size_t reach = top + 6 + static_cast<std::size_t>(ceil_log2(Rational(2) * f.bound + Rational(1)));
  std::vector<std::size_t> tm_ns;
  for (std::size_t N = 0; N <= reach; ++N) tm_ns.push_back(N);
  out.tm_verdict = check_modulus([&](std::size_t n) { return seq(n)->total_mass(); }, limit_total, tm, tm_ns, fuel);
  out.tm_ok = out.tm_verdict.pass;
  if (!out.tm_ok) return out;
  for (const std::size_t N : ns) out.moduli.push_back(vague_to_weak(seq, tm, oracle, f, N));
  return out;
}

// ---- vague limit ------------------------------------------------------------

namespace {

class VagueLimit : public Measure {
 public:
  VagueLimit(MeasureSeq seq, PolyOracle oracle, CauchyReal total)
      : seq_(std::move(seq)), oracle_(std::move(oracle)), total_(std::move(total)) {}

  CauchyReal total_mass() const override { return total_; }

  LowerReal open_mass(const SigmaSet& u) const override {
    auto best = std::make_shared<Rational>(0);
    VagueLimit self = *this;
    return LowerReal::from_terms([self, u, best](std::size_t t) {
      const IntervalSet w = pulled_union(u.enumeration, slots_for_round(t));
      const Rational far = Rational::pow2(static_cast<long>(t));
      Rational sum(0);
      for (const auto& sp : w.spans()) {
        Rational l = sp.lo ? *sp.lo : (sp.hi ? *sp.hi - far : -far);
        Rational r = sp.hi ? *sp.hi : l + (sp.lo ? far : Rational(2) * far);
        if (!(l < r)) continue;
        Rational comp(0);
        for (std::size_t k = 0; k <= t; ++k) comp = max(comp, self.tent_lower(l, r, k, t));
        sum += comp;
      }
      *best = max(*best, sum);
      return *best;
    });
  }

  Rational integrate_approx(const PolyFunc& p, std::size_t n) const override {
    if (!p.support().is_bounded())
      throw Error(ErrorKind::UnsupportedMeasure, "vague limit integrates compactly supported functions only");
    const std::size_t m = oracle_(p)(n + 1);
    return seq_(m)->integrate_approx(p, n + 1);
  }

  Rational tail_bound(const Rational& a, std::size_t effort) const override {
    const std::size_t e = effort + 2;
    const Rational total = total_.approx(e) + Rational::pow2(1 - static_cast<long>(e));
    if (a < Rational(1)) return total;
    const PolyFunc tent = tent_function(-(a - Rational(1)), a - Rational(1));
    return max(Rational(0), total - (integrate_approx(tent, e) - Rational::pow2(-static_cast<long>(e))));
  }

  std::optional<std::vector<Rational>> atom_locations() const override { return std::nullopt; }
  bool exact() const override { return false; }

 private:
  // Lower bound on ∫T_k dμ for the trapezoid T_k of (l, r), from the
  // sequence member the oracle certifies within 2^-t.
  Rational tent_lower(const Rational& l, const Rational& r, std::size_t k, std::size_t t) const {
    const PolyFunc tk = indicator_approx(l, r, static_cast<unsigned>(k));
    const std::size_t m = oracle_(tk)(t);
    return integral_lower(*seq_(m), tk, t + 1) - Rational::pow2(-static_cast<long>(t));
  }

  MeasureSeq seq_;
  PolyOracle oracle_;
  CauchyReal total_;
};

}  // namespace

MeasurePtr limit_from_vague(const MeasureSeq& seq, const PolyOracle& oracle, const CauchyReal& total_mass) {
  return std::make_shared<VagueLimit>(seq, oracle, total_mass);
}

// ---- portmanteau ----------------------------------------------------------------

Verdict portmanteau_check(const MeasureSeq& seq, const MeasurePtr& limit, PortmanteauMode mode,
                          const IntervalSet& target, const Witness& g, const std::vector<Rational>& samples, Fuel fuel) {
  if (mode == PortmanteauMode::AlmostDecidable)
    throw Error(ErrorKind::Precondition, "almost decidable targets take a modulus certificate");
  const bool limsup = mode == PortmanteauMode::ClosedLimsup;
  if (limsup && !target.is_closed()) throw Error(ErrorKind::Precondition, "limsup target must be closed");
  if (!limsup && !target.is_open()) throw Error(ErrorKind::Precondition, "liminf target must be open");
  const Rational mu_a = limit->mass(target);
  Verdict v;
  for (const auto& r : samples) {
    const bool in_domain = limsup ? (r > mu_a) : (r < mu_a);
    const std::optional<std::size_t> idx = g(r);
    if (!in_domain || !idx) {
      // Outside the cut the witness must stay undefined; inside it must answer.
      CheckRow row{r.str(), idx, 0, mu_a, r, in_domain == idx.has_value()};
      v.pass = v.pass && row.pass;
      v.rows.push_back(std::move(row));
      continue;
    }
    for (std::size_t n = *idx; n <= *idx + fuel.budget; ++n) {
      const Rational a = seq(n)->mass(target);
      CheckRow row{r.str(), idx, n, a, r, limsup ? (r > a) : (r < a)};
      v.pass = v.pass && row.pass;
      v.rows.push_back(std::move(row));
    }
  }
  return v;
}

Verdict portmanteau_check(const MeasureSeq& seq, const MeasurePtr& limit, const IntervalSet& target, const Modulus& m,
                          const std::vector<std::size_t>& ns, Fuel fuel) {
  std::vector<Span> boundary;
  for (const auto& sp : target.spans()) {
    if (sp.lo) boundary.push_back(Span{sp.lo, true, sp.lo, true});
    if (sp.hi) boundary.push_back(Span{sp.hi, true, sp.hi, true});
  }
  if (!limit->mass(IntervalSet::from_spans(std::move(boundary))).is_zero())
    throw Error(ErrorKind::Precondition, "target boundary carries limit mass");
  return check_modulus([&](std::size_t n) { return seq(n)->mass(target); }, limit->mass(target), m, ns, fuel);
}

}  // namespace effconv
