#include "thermoait/relations.hpp"

#include <algorithm>

#include "thermoait/elementary.hpp"
#include "thermoait/error.hpp"

namespace thermoait {
namespace {

constexpr unsigned kGuard = 16;

const Enclosure& pick(const ThermoEvaluation& ev, DerivedQuantity q) {
  switch (q) {
    case DerivedQuantity::F: return ev.F;
    case DerivedQuantity::E: return ev.E;
    case DerivedQuantity::S: return ev.S;
  }
  return ev.F;
}

void require_step(const Temperature& T, const Dyadic& h) {
  if (h.sign() <= 0 || h > Dyadic::pow2(-6)) throw PreconditionError("step h must satisfy 0 < h <= 2^-6");
  const Rational hq = h.to_rational();
  if (T.value() - hq <= 0 || T.value() + hq >= 1) {
    throw PreconditionError("T - h and T + h must lie in (0,1)");
  }
}

Enclosure residual_at(const EnsembleSnapshot& s, DerivedQuantity q, const Temperature& T, const mpz_class& k,
                      const Dyadic& h, unsigned precision) {
  const unsigned wp = precision + kGuard;
  const Rational hq = h.to_rational();
  const ThermoEvaluation below = eval_partial(s, Temperature(T.value() - hq), k, precision);
  const ThermoEvaluation above = eval_partial(s, Temperature(T.value() + hq), k, precision);
  const ThermoEvaluation mid = eval_partial(s, T, k, precision);
  const Enclosure central = divide(pick(above, q) - pick(below, q), Enclosure(h.ldexp(1)), wp);
  Enclosure analytic;
  switch (q) {
    case DerivedQuantity::F: analytic = -mid.S; break;
    case DerivedQuantity::E: analytic = mid.C; break;
    case DerivedQuantity::S: analytic = divide(mid.C, T.enclosure(wp), wp); break;
  }
  return (central - analytic).round_out(precision + 8);
}

RelationReport overlap_report(RelationId id, const Temperature& T, const Depth& depth, const Enclosure& a,
                              const Enclosure& b) {
  return {id, T, depth, a - b, a.overlaps(b) ? Verdict::pass : Verdict::fail, {}};
}

template <typename F>
RelationReport guarded(RelationId id, const Temperature& T, const Depth& depth, F&& body) {
  try {
    return body();
  } catch (const PrecisionError& e) {
    return {id, T, depth, Enclosure(0), Verdict::unresolved, e.what()};
  } catch (const DomainError& e) {
    return {id, T, depth, Enclosure(0), Verdict::unresolved, e.what()};
  }
}

// -q log2 q at an exact q in (0, 1], as an enclosure.
Enclosure self_information(const Dyadic& q, unsigned wp) {
  const Enclosure qe(q);
  return -(qe * log2(qe, wp));
}

}  // namespace

std::string_view relation_name(RelationId id) {
  switch (id) {
    case RelationId::F_deriv: return "F'=-S";
    case RelationId::E_deriv: return "E'=C";
    case RelationId::S_deriv: return "S'=C/T";
    case RelationId::S_chain: return "S_chain";
    case RelationId::gibbs_S: return "gibbs_S";
    case RelationId::variance_C: return "variance_C";
    case RelationId::F_identity: return "F_identity";
    case RelationId::positivity: return "positivity";
    case RelationId::monotone: return "monotone";
  }
  return "?";
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::unresolved: return "unresolved";
  }
  return "?";
}

Dyadic derivative_error_constant(const EnsembleSnapshot& s, DerivedQuantity q, const Temperature& T,
                                 const mpz_class& k, const Dyadic& h, unsigned precision) {
  require_step(T, h);
  const unsigned wp = precision + kGuard;
  const Rational hq = h.to_rational();
  const Temperature t_lo(T.value() - hq);
  const Temperature t_hi(T.value() + hq);
  const std::uint32_t last = s.length_at(k);
  const MomentTable a(s, t_lo, precision, last);
  const MomentTable b(s, t_hi, precision, last);
  const auto rows_a = a.rows_through(k);
  const auto rows_b = b.rows_through(k);
  const auto Ra = a.moments(rows_a, 1);
  const auto Rb = b.moments(rows_b, 1);

  // Every weight v_ℓ (ℓ >= ℓ1), R0 and E_k increase with T, so their ranges
  // over [T-h, T+h] are spanned by the endpoint enclosures.
  const Enclosure R0(Ra[0].lo(), Rb[0].hi());
  const Enclosure E(divide(Ra[1], Ra[0], wp).lo(), divide(Rb[1], Rb[0], wp).hi());
  Enclosure mu2(0), mu3(0), mu4(0);
  for (std::size_t i = 0; i < rows_a.size(); ++i) {
    const Enclosure w = Enclosure(Dyadic(rows_a[i].count, 0)) * Enclosure(rows_a[i].v.lo(), rows_b[i].v.hi());
    const Enclosure p = divide(w, R0, wp);
    const Enclosure d = Enclosure(static_cast<long>(rows_a[i].length)) - E;
    const Enclosure d2 = square(d);
    mu2 = (mu2 + p * d2).round_out(wp);
    mu3 = (mu3 + p * d2 * d).round_out(wp);
    mu4 = (mu4 + p * square(d2)).round_out(wp);
  }
  const Enclosure k2 = mu2;
  const Enclosure k3 = mu3;
  const Enclosure k4 = (mu4 - Enclosure(3) * square(mu2)).round_out(wp);

  const Enclosure Tint(t_lo.enclosure(wp).lo(), t_hi.enclosure(wp).hi());
  const Enclosure inv = divide(Enclosure(1), Tint, wp);
  const Enclosure inv2 = square(inv);
  const Enclosure l2 = ln2(wp);
  // Cumulants move as dκ_n/dT = κ_{n+1} g with g = ln2/T^2.
  const Enclosure g = (l2 * inv2).round_out(wp);
  const Enclosure g1 = (Enclosure(-2) * l2 * inv2 * inv).round_out(wp);
  const Enclosure g2 = (Enclosure(6) * l2 * square(inv2)).round_out(wp);
  const Enclosure C = k2 * g;
  const Enclosure C1 = (k3 * square(g) + k2 * g1).round_out(wp);
  const Enclosure C2 = (k4 * g * g * g + Enclosure(3) * k3 * g * g1 + k2 * g2).round_out(wp);

  Enclosure third;
  switch (q) {
    case DerivedQuantity::F: third = -(C1 * inv) + C * inv2; break;
    case DerivedQuantity::E: third = C2; break;
    case DerivedQuantity::S: third = C2 * inv - Enclosure(2) * C1 * inv2 + Enclosure(2) * C * inv2 * inv; break;
  }
  return divide(Enclosure(third.magnitude()), Enclosure(6), wp).hi();
}

RelationReport check_derivative(const EnsembleSnapshot& s, DerivedQuantity q, const Temperature& T,
                                const mpz_class& k, const Dyadic& h, unsigned precision) {
  require_step(T, h);
  const RelationId id = q == DerivedQuantity::F   ? RelationId::F_deriv
                        : q == DerivedQuantity::E ? RelationId::E_deriv
                                                  : RelationId::S_deriv;
  const Depth depth = Depth::prefix(k);
  return guarded(id, T, depth, [&] {
    const Enclosure residual = residual_at(s, q, T, k, h, precision);
    const Dyadic K = derivative_error_constant(s, q, T, k, h, precision);
    const Dyadic budget = round(K * h * h, precision, Rounding::up);
    Verdict v = Verdict::unresolved;
    if (residual.lo() >= -budget && residual.hi() <= budget) {
      v = Verdict::pass;
    } else if (residual.hi() < -budget || residual.lo() > budget) {
      v = Verdict::fail;
    }
    return RelationReport{id, T, depth, residual, v, "K h^2 = " + to_decimal(budget, 6, Rounding::up)};
  });
}

std::optional<Enclosure> richardson_ratio(const EnsembleSnapshot& s, DerivedQuantity q, const Temperature& T,
                                          const mpz_class& k, const Dyadic& h, unsigned precision) {
  require_step(T, h);
  const Enclosure r1 = residual_at(s, q, T, k, h, precision);
  const Enclosure r2 = residual_at(s, q, T, k, h.ldexp(-1), precision);
  if (r2.lo().sign() <= 0 && r2.hi().sign() >= 0) return std::nullopt;
  return divide(r1, r2, precision);
}

std::vector<RelationReport> check_identities(const EnsembleSnapshot& s, const Temperature& T, const Depth& depth,
                                             unsigned precision) {
  if (depth.is_limit()) T.require_unit_interval("check_identities");
  const unsigned wp = precision + kGuard;
  const ThermoEvaluation ev = evaluate(s, T, depth, precision);
  const Enclosure invT = Enclosure::of(1 / T.value(), wp);

  std::vector<RelationReport> out;
  Enclosure eq9, ef;
  bool have_forms = false;
  out.push_back(guarded(RelationId::S_chain, T, depth, [&] {
    eq9 = divide(ev.W, ev.Z, wp) * invT + log2(ev.Z, wp);
    ef = (ev.E - ev.F) * invT;
    have_forms = true;
    return overlap_report(RelationId::S_chain, T, depth, eq9, ef);
  }));
  out.push_back(guarded(RelationId::gibbs_S, T, depth, [&] {
    const Enclosure gibbs = gibbs_entropy(s, T, depth, precision);
    RelationReport r = overlap_report(RelationId::gibbs_S, T, depth, gibbs, eq9);
    if (!gibbs.overlaps(ef)) r.verdict = Verdict::fail;
    if (!have_forms) r.verdict = Verdict::unresolved;
    return r;
  }));
  out.push_back(guarded(RelationId::variance_C, T, depth, [&] {
    const Enclosure heat = divide(ln2(wp), Enclosure::of(T.value() * T.value(), wp), wp);
    const Enclosure mean = divide(ev.W, ev.Z, wp);
    const Enclosure c12 = heat * (divide(ev.Y, ev.Z, wp) - square(mean));
    return overlap_report(RelationId::variance_C, T, depth, c12, variance_heat(s, T, depth, precision));
  }));
  out.push_back(guarded(RelationId::F_identity, T, depth, [&] {
    const Enclosure direct = -(T.enclosure(wp) * log2(ev.Z, wp));
    return overlap_report(RelationId::F_identity, T, depth, ev.F, direct);
  }));
  for (auto& r : out) r.residual = r.residual.round_out(precision + 8);
  return out;
}

mpz_class first_mixed_index(const EnsembleSnapshot& s) {
  if (s.census().size() < 2) return s.total() + 1;
  return s.census().begin()->second + 1;
}

std::vector<RelationReport> check_positivity(const EnsembleSnapshot& s, const std::vector<Temperature>& grid,
                                             const Depth& depth, unsigned precision) {
  const unsigned wp = precision + kGuard;
  const mpz_class k0 = first_mixed_index(s);
  std::vector<RelationReport> out;
  for (const auto& T : grid) {
    T.require_unit_interval("check_positivity");
    out.push_back(guarded(RelationId::positivity, T, depth, [&] {
      const ThermoEvaluation ev = evaluate(s, T, depth, precision);
      Dyadic s_low = ev.S.lo();
      Dyadic c_low = ev.C.lo();
      if (depth.is_limit()) {
        // One-term witnesses: S >= -q1 log2 q1 and C >= (ln2/T^2)(E - ℓ1)^2 q1,
        // with q1 the Gibbs weight of the first program and E >= E_K.
        const std::uint32_t l1 = s.shortest_length();
        const Enclosure w1 = exp2(Rational(-static_cast<long>(l1)) / T.value(), wp);
        const Dyadic q_lo = divide(w1.lo(), ev.Z.hi(), wp, Rounding::down);
        const Dyadic q_hi = std::min(Dyadic(1), divide(w1.hi(), ev.Z.lo(), wp, Rounding::up));
        // -q log q is concave, so its minimum over [q_lo, q_hi] is at an end.
        const Dyadic s_witness = std::min(self_information(q_lo, wp).lo(), self_information(q_hi, wp).lo());
        s_low = std::max(s_low, s_witness);
        const Enclosure EK = eval_partial(s, T, s.total(), precision).E;
        const Dyadic gap = EK.lo() - Dyadic(static_cast<long>(l1));
        if (gap.sign() > 0) {
          const Enclosure heat = divide(ln2(wp), Enclosure::of(T.value() * T.value(), wp), wp);
          c_low = std::max(c_low, (heat * square(Enclosure(gap)) * Enclosure(q_lo)).lo());
        }
      }
      const Dyadic lo = std::min(s_low, c_low);
      const Dyadic hi = std::max(lo, std::min(ev.S.hi(), ev.C.hi()));
      RelationReport r{RelationId::positivity, T, depth, Enclosure(lo, hi), Verdict::pass, {}};
      r.detail = "S >= " + to_decimal(s_low, 6, Rounding::down) + ", C >= " + to_decimal(c_low, 6, Rounding::down);
      if (ev.S.hi().sign() < 0 || ev.C.hi().sign() < 0) {
        r.verdict = Verdict::fail;
      } else if (depth.is_limit()) {
        if (s_low.sign() <= 0 || c_low.sign() <= 0) r.verdict = Verdict::unresolved;
      } else if (depth.k >= k0 && s_low.sign() <= 0) {
        r.verdict = Verdict::unresolved;
      }
      return r;
    }));
  }
  return out;
}

RelationReport check_monotone(const EnsembleSnapshot& s, MonotoneQuantity q, const std::vector<Temperature>& grid,
                              const Depth& depth, unsigned precision) {
  const Temperature anchor = grid.empty() ? Temperature(1, 2) : grid.front();
  const bool descending = q == MonotoneQuantity::F;
  const Quantity which = q == MonotoneQuantity::Z   ? Quantity::Z
                         : q == MonotoneQuantity::F ? Quantity::F
                         : q == MonotoneQuantity::E ? Quantity::E
                                                    : Quantity::S;
  return guarded(RelationId::monotone, anchor, depth, [&] {
    const auto evs = sweep(s, grid, depth, precision);
    RelationReport r{RelationId::monotone, anchor, depth, Enclosure(0), Verdict::pass, {}};
    r.detail = std::string(quantity_name(which)) + (descending ? " descending" : " ascending");
    Dyadic min_step;
    bool first = true;
    for (std::size_t i = 1; i < evs.size(); ++i) {
      const Enclosure& a = evs[i - 1].get(which);
      const Enclosure& b = evs[i].get(which);
      const Order o = compare(a, b);
      const Order want = descending ? Order::greater : Order::less;
      if (o == want) {
        const Enclosure step = descending ? a - b : b - a;
        if (first || step.lo() < min_step) min_step = step.lo();
        first = false;
        continue;
      }
      if (a.is_point() && a == b) continue;
      if (o == Order::unresolved) {
        r.verdict = Verdict::unresolved;
      } else {
        r.verdict = Verdict::fail;
        r.detail += " broken between T=" + evs[i - 1].T.str() + " and T=" + evs[i].T.str();
        break;
      }
    }
    if (!first) r.residual = Enclosure(min_step);
    return r;
  });
}

}  // namespace thermoait
