#include "thermoait/fixedpoint.hpp"

#include <algorithm>
#include <set>

#include "thermoait/closed_form.hpp"
#include "thermoait/elementary.hpp"
#include "thermoait/error.hpp"
#include "thermoait/expansion.hpp"
#include "thermoait/relations.hpp"

namespace thermoait {
namespace {

constexpr unsigned kGuard = 16;
constexpr unsigned kEscalations = 3;

Enclosure len(std::uint32_t l) { return Enclosure(static_cast<long>(l)); }

Enclosure length_power(std::uint32_t l, unsigned j) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), l, j);
  return Dyadic(p, 0);
}

// Smallest e >= 0 with 2^e >= x.
unsigned ceil_log2_upper(const Dyadic& x) {
  if (x.sign() <= 0) return 0;
  const std::int64_t m = x.msb();
  const std::int64_t e = x == Dyadic::pow2(m) ? m : m + 1;
  return static_cast<unsigned>(std::max<std::int64_t>(0, e));
}

// Smallest e >= 0 with 2^-e <= x.
unsigned ceil_neg_log2_lower(const Dyadic& x, std::string_view what) {
  if (x.sign() <= 0) throw CertificationError(std::string(what) + " is not certified positive");
  return static_cast<unsigned>(std::max<std::int64_t>(0, -x.msb()));
}

enum class Check { holds, violated, unresolved };

// a <= b, certified.
Check certified_le(const Enclosure& a, const Enclosure& b) {
  if (a.hi() <= b.lo()) return Check::holds;
  if (a.lo() > b.hi()) return Check::violated;
  return Check::unresolved;
}

// Collects verdicts of one verification pass.
struct Audit {
  bool unresolved = false;
  void require(Check c, const std::string& what) {
    if (c == Check::violated) throw CertificationError(what);
    if (c == Check::unresolved) unresolved = true;
  }
};

template <typename Pass>
void with_escalation(unsigned precision, std::string_view what, Pass pass) {
  for (unsigned i = 0; i <= kEscalations; ++i) {
    Audit audit;
    pass(precision << i, audit);
    if (!audit.unresolved) return;
  }
  throw PrecisionError(std::string(what) + " unresolved at " + std::to_string(precision << kEscalations) + " bits");
}

struct CensusGroup {
  std::uint32_t length;
  mpz_class first;  // 1-based positions
  mpz_class last;
};

std::vector<CensusGroup> groups(const EnsembleSnapshot& s) {
  std::vector<CensusGroup> out;
  mpz_class seen = 0;
  for (const auto& [l, count] : s.census()) {
    out.push_back({l, seen + 1, seen + count});
    seen += count;
  }
  return out;
}

// Smallest k in [lo, hi] with pred(k), given pred(hi). pred is monotone up to
// rounding; the returned k satisfies pred regardless.
template <typename Pred>
mpz_class first_true(mpz_class lo, mpz_class hi, Pred pred) {
  while (lo < hi) {
    const mpz_class mid = (lo + hi) / 2;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return hi;
}

// Prefix values at x with a precision that tracks the oracle index.
class GrowingPrefix {
 public:
  GrowingPrefix(const QuantityHandle& h, Temperature x) : h_(h), x_(std::move(x)) {}
  const PrefixValues& at_precision(unsigned p) {
    if (!pv_ || p > prec_) {
      prec_ = std::max(p, h_.precision());
      pv_.emplace(h_.snapshot(), h_.quantity(), x_, prec_);
    }
    return *pv_;
  }

 private:
  const QuantityHandle& h_;
  Temperature x_;
  unsigned prec_ = 0;
  std::optional<PrefixValues> pv_;
};

void check_increments(const QuantityHandle& h, unsigned prec, Audit& audit) {
  // ΔZ = 2^-ℓ/T is the bound itself (b = c = 0), nothing to compare.
  if (h.quantity() == HandleQuantity::Z) return;
  const EnsembleSnapshot& s = h.snapshot();
  const ConditionCertificate& cert = h.certificate();
  const unsigned wp = prec + kGuard;
  const MomentTable table(s, h.T(), prec);
  const std::uint32_t l1 = table.shortest();
  const Enclosure Tq = h.T().enclosure(wp);
  const Enclosure lead = exp2(Rational(-static_cast<long>(l1)) / h.T().value(), wp);
  const auto& rows = table.rows();
  const auto gs = groups(s);
  for (std::size_t g = 0; g < gs.size(); ++g) {
    const mpz_class from = std::max<mpz_class>(gs[g].first, cert.k0 + 1);
    if (from > gs[g].last) continue;
    // Within one length the increments shrink as k grows, so the bounds only
    // need checking at both ends of the group.
    std::vector<mpz_class> ends{from};
    if (gs[g].last != from) ends.push_back(gs[g].last);
    const std::uint32_t l = gs[g].length;
    const Enclosure& v = rows[g].v;
    for (const auto& next : ends) {
      const mpz_class k = next - 1;
      const std::vector<Enclosure> R = table.moments(k, 1);
      const Enclosure ratio = divide(v, R[0], wp);
      const Enclosure dlog = log2_1p(ratio, wp);
      const Enclosure dE = divide(v * (len(l) - divide(R[1], R[0], wp)), R[0] + v, wp);
      Enclosure delta;
      switch (h.quantity()) {
        case HandleQuantity::negF: delta = Tq * dlog; break;
        case HandleQuantity::E: delta = dE; break;
        case HandleQuantity::S: delta = divide(dE, Tq, wp) + dlog; break;
        case HandleQuantity::Z: break;
      }
      const Enclosure w = lead * v;
      const Enclosure lower = (length_power(l, cert.c) * w).ldexp(-static_cast<std::int64_t>(cert.b));
      const Enclosure upper = (length_power(l, cert.b_upper) * w).ldexp(cert.c_upper);
      const std::string at = " at k = " + k.get_str() + " (length " + std::to_string(l) + ")";
      audit.require(certified_le(lower, delta), "increment lower bound fails" + at);
      audit.require(certified_le(delta, upper), "increment upper bound fails" + at);
    }
  }
}

void check_slopes(const QuantityHandle& h, unsigned prec, Audit& audit) {
  const EnsembleSnapshot& s = h.snapshot();
  const ConditionCertificate& cert = h.certificate();
  const Rational T = h.T().value();
  const Rational span = cert.t.value() - T;
  const std::vector<mpz_class> ks{cert.k0, (cert.k0 + s.total()) / 2, s.total()};
  const PrefixValues base(s, h.quantity(), h.T(), prec);
  for (int j = 1; j <= 3; ++j) {
    const Temperature x(T + span * j / 4);
    const PrefixValues at_x(s, h.quantity(), x, prec);
    const Enclosure dx = Enclosure::of(x.value() - T, prec + kGuard);
    for (const auto& k : ks) {
      const Enclosure diff = at_x.at(k) - base.at(k);
      const std::string at = " at x = " + x.str() + ", k = " + k.get_str();
      audit.require(certified_le(diff, dx.ldexp(cert.a)), "slope upper bound fails" + at);
      audit.require(certified_le(dx.ldexp(-static_cast<std::int64_t>(cert.a_lower)), diff),
                    "slope lower bound fails" + at);
    }
  }
}

// Lengths of the programs at positions (from, to].
std::vector<std::uint32_t> lengths_between(const EnsembleSnapshot& s, const mpz_class& from, const mpz_class& to) {
  std::vector<std::uint32_t> out;
  for (const auto& g : groups(s)) {
    if (g.last > from && g.first <= to) out.push_back(g.length);
  }
  return out;
}

}  // namespace

std::string_view handle_quantity_name(HandleQuantity q) {
  switch (q) {
    case HandleQuantity::Z: return "Z";
    case HandleQuantity::negF: return "-F";
    case HandleQuantity::E: return "E";
    case HandleQuantity::S: return "S";
  }
  return "?";
}

HandleQuantity parse_handle_quantity(std::string_view text) {
  if (text == "Z") return HandleQuantity::Z;
  if (text == "-F" || text == "negF") return HandleQuantity::negF;
  if (text == "E") return HandleQuantity::E;
  if (text == "S") return HandleQuantity::S;
  throw PreconditionError("unknown quantity '" + std::string(text) + "' (expected Z, -F, E or S)");
}

PrefixValues::PrefixValues(const EnsembleSnapshot& snapshot, HandleQuantity q, const Temperature& x,
                           unsigned precision, std::optional<std::uint32_t> through_length)
    : q_(q),
      table_(snapshot, x, precision, through_length),
      lead_(exp2(Rational(-static_cast<long>(snapshot.shortest_length())) / x.value(), precision + kGuard)) {}

Enclosure PrefixValues::at(const mpz_class& k) const {
  const unsigned wp = table_.precision() + kGuard;
  const Rational& x = table_.temperature().value();
  const Enclosure l1 = len(table_.shortest());
  const bool first_moment = q_ == HandleQuantity::E || q_ == HandleQuantity::S;
  const std::vector<Enclosure> R = table_.moments(k, first_moment ? 1 : 0);
  switch (q_) {
    case HandleQuantity::Z: return (lead_ * R[0]).round_out(wp);
    case HandleQuantity::negF: return (Enclosure::of(x, wp) * log2(R[0], wp) - l1).round_out(wp);
    case HandleQuantity::E: return divide(R[1], R[0], wp);
    case HandleQuantity::S: {
      const Enclosure E = divide(R[1], R[0], wp);
      return ((E - l1) * Enclosure::of(1 / x, wp) + log2(R[0], wp)).round_out(wp);
    }
  }
  return {};
}

Enclosure limit_value(const EnsembleSnapshot& s, HandleQuantity q, const Temperature& x, unsigned precision) {
  x.require_unit_interval("limit value");
  const unsigned wp = precision + kGuard;
  const EnsembleSpec spec = s.spec();
  const auto Z = closed_form_Z(spec, x, wp);
  const auto E = (q == HandleQuantity::E || q == HandleQuantity::S) ? closed_form_E(spec, x, wp) : std::nullopt;
  const bool closed = Z && (E || q == HandleQuantity::Z || q == HandleQuantity::negF);
  if (closed) {
    switch (q) {
      case HandleQuantity::Z: return *Z;
      case HandleQuantity::negF: return (x.enclosure(wp) * log2(*Z, wp)).round_out(precision + 8);
      case HandleQuantity::E: return *E;
      case HandleQuantity::S:
        return (divide(*E, x.enclosure(wp), wp) + log2(*Z, wp)).round_out(precision + 8).clamp_below(Dyadic());
    }
  }
  const ThermoEvaluation ev = eval_limit(s, x, precision);
  switch (q) {
    case HandleQuantity::Z: return ev.Z;
    case HandleQuantity::negF: return -ev.F;
    case HandleQuantity::E: return ev.E;
    case HandleQuantity::S: return ev.S;
  }
  return {};
}

QuantityHandle::QuantityHandle(std::shared_ptr<const EnsembleSnapshot> snapshot, HandleQuantity q, Temperature T,
                               ConditionCertificate certificate, unsigned precision)
    : snapshot_(std::move(snapshot)), q_(q), T_(std::move(T)), cert_(std::move(certificate)), precision_(precision) {
  if (!snapshot_) throw PreconditionError("quantity handle needs a snapshot");
}

Enclosure QuantityHandle::g(const Temperature& x, const mpz_class& k, std::optional<unsigned> precision) const {
  const PrefixValues pv(*snapshot_, q_, x, precision.value_or(precision_), snapshot_->length_at(k));
  return pv.at(k);
}

Enclosure QuantityHandle::f(std::optional<unsigned> precision) const {
  return limit_value(*snapshot_, q_, T_, precision.value_or(precision_));
}

QuantityHandle certify(std::shared_ptr<const EnsembleSnapshot> snapshot, HandleQuantity q, const Temperature& T,
                       unsigned precision) {
  if (!snapshot) throw PreconditionError("certify needs a snapshot");
  T.require_unit_interval("certify");
  const EnsembleSnapshot& s = *snapshot;
  const unsigned wp = precision + kGuard;
  ConditionCertificate cert;
  cert.t = Temperature((T.value() + 1) / 2);
  const Temperature& t = cert.t;
  const ThermoEvaluation evT = eval_limit(s, T, precision);
  const ThermoEvaluation evt = eval_limit(s, t, precision);
  const Enclosure L2 = ln2(wp);
  const std::uint32_t l1 = s.shortest_length();
  const Enclosure Tq = T.enclosure(wp);
  const Enclosure tq = t.enclosure(wp);
  const Enclosure w1 = exp2(Rational(-static_cast<long>(l1)) / T.value(), wp);
  const PrefixValues Zpre(s, HandleQuantity::Z, T, precision);

  switch (q) {
    case HandleQuantity::Z: {
      // dZ_k/dx = (ln2/x^2) W_k(x), between (ln2/t^2) W_1(T) and (ln2/T^2) W(t).
      cert.k0 = 1;
      cert.a = ceil_log2_upper(divide(L2 * evt.W, square(Tq), wp).hi());
      cert.a_lower = ceil_neg_log2_lower(divide(L2 * len(l1) * w1, square(tq), wp).lo(), "slope lower bound");
      break;
    }
    case HandleQuantity::negF: {
      // d(-F_k)/dx = S_k(x), and S_k grows with k and x.
      if (s.total() < 2) throw PreconditionError("certify -F needs at least two programs");
      cert.k0 = 2;
      const Enclosure S2 = PrefixValues(s, HandleQuantity::S, T, precision).at(2);
      cert.a = ceil_log2_upper(evt.S.hi());
      cert.a_lower = ceil_neg_log2_lower(S2.lo(), "S_2(T)");
      // T w/(Z ln2) <= T log2(1 + w/Z_k) <= T w/(Z_k ln2)
      cert.b = ceil_log2_upper(divide(evT.Z * L2, Tq, wp).hi());
      cert.c_upper = ceil_log2_upper(divide(Tq, Zpre.at(cert.k0) * L2, wp).hi());
      break;
    }
    case HandleQuantity::E:
    case HandleQuantity::S: {
      // Past k0 every new length is at least 2E(T), so ΔE >= ℓ w/(2 Z_{k+1}).
      const Dyadic threshold = evT.E.hi().ldexp(1);
      mpz_class below = 0;
      for (const auto& [l, count] : s.census()) {
        if (Dyadic(static_cast<long>(l)) < threshold) below += count;
      }
      cert.k0 = std::max({below, first_mixed_index(s), mpz_class(1)});
      if (cert.k0 + 1 > s.total()) {
        throw PreconditionError("census too short to certify " + std::string(handle_quantity_name(q)) +
                                ": need lengths beyond 2E(T) = " + to_decimal(threshold, 6, Rounding::up));
      }
      const Enclosure Ek0 = PrefixValues(s, HandleQuantity::E, T, precision).at(cert.k0);
      // C_k(y) <= (ln2/T^2) Y(t)/Z_1(T) and C_k(y) >= (ln2/t^2)(E_k0(T) - ℓ1)^2 w1(T)/Z(t).
      Enclosure upper = divide(L2 * evt.Y, square(Tq) * w1, wp);
      Enclosure lower = divide(L2 * square(Ek0 - len(l1)) * w1, square(tq) * evt.Z, wp);
      const Enclosure Zk0 = Zpre.at(cert.k0);
      const Enclosure Zk1 = Zpre.at(cert.k0 + 1);
      cert.c = 1;
      cert.b_upper = 1;
      if (q == HandleQuantity::E) {
        cert.b = ceil_log2_upper((evT.Z.ldexp(1)).hi());
        cert.c_upper = ceil_log2_upper(divide(Enclosure(1), Zk1, wp).hi());
      } else {
        upper = divide(upper, Tq, wp);
        lower = divide(lower, tq, wp);
        cert.b = ceil_log2_upper((evT.Z * Tq).ldexp(1).hi());
        cert.c_upper = ceil_log2_upper(
            (divide(Enclosure(1), Zk1 * Tq, wp) + divide(Enclosure(1), Zk0 * L2, wp)).hi());
      }
      cert.a = ceil_log2_upper(upper.hi());
      cert.a_lower = ceil_neg_log2_lower(lower.lo(), "slope lower bound");
      break;
    }
  }

  QuantityHandle handle(std::move(snapshot), q, T, cert, precision);
  with_escalation(precision, "certificate check", [&](unsigned p, Audit& audit) {
    check_increments(handle, p, audit);
    check_slopes(handle, p, audit);
  });
  return handle;
}

Enclosure solve_temperature(const EnsembleSnapshot& s, HandleQuantity q, const Enclosure& target, const Dyadic& tol,
                            const SolveOptions& options) {
  if (tol.sign() <= 0) throw PreconditionError("tolerance must be positive");
  Rational lo = options.bracket_lo;
  Rational hi = options.bracket_hi;
  if (lo <= 0 || hi >= 1 || lo >= hi) throw PreconditionError("bracket must satisfy 0 < lo < hi < 1");
  auto order_at = [&](const Rational& x) {
    for (unsigned i = 0; i <= options.max_escalations; ++i) {
      const Order o = compare(limit_value(s, q, Temperature(x), options.precision << i), target);
      if (o != Order::unresolved) return o;
    }
    return Order::unresolved;
  };
  const std::string name(handle_quantity_name(q));
  if (order_at(lo) != Order::less) {
    throw RangeError("target " + target.decimal(10) + " is not above " + name + " at T = " + to_string(lo));
  }
  if (order_at(hi) != Order::greater) {
    std::string msg = "target " + target.decimal(10) + " is not below " + name + " at T = " + to_string(hi);
    if (q == HandleQuantity::Z) msg += " (Z stays below the Kraft sum, at most 1, on (0,1))";
    throw RangeError(msg);
  }
  const Rational tolq = tol.to_rational();
  while (hi - lo > tolq) {
    const Rational mid = (lo + hi) / 2;
    const Order o = order_at(mid);
    if (o == Order::less) {
      lo = mid;
    } else if (o == Order::greater) {
      hi = mid;
    } else {
      // f(mid) overlaps the target: settle on a window of width tol/2 around it.
      const Rational d = tolq / 4;
      if (order_at(mid - d) != Order::less || order_at(mid + d) != Order::greater) {
        throw PrecisionError("comparison with the target unresolved near T = " + to_string(mid));
      }
      lo = mid - d;
      hi = mid + d;
    }
  }
  return {approximate(lo, options.precision, Rounding::down), approximate(hi, options.precision, Rounding::up)};
}

WitnessReport witness_search(const QuantityHandle& h, const BitString& T_bits, Oracle& upper,
                             unsigned verify_factor) {
  const EnsembleSnapshot& s = h.snapshot();
  const ConditionCertificate& cert = h.certificate();
  const unsigned n = static_cast<unsigned>(T_bits.size());
  if (n == 0) throw PreconditionError("witness search needs at least one bit of T");
  const Dyadic Tn = binary_fraction(T_bits);
  const Dyadic r = Tn + Dyadic::pow2(-static_cast<std::int64_t>(n));
  if (compare(r, cert.t.value()) >= 0) {
    throw PreconditionError("n = " + std::to_string(n) + " is too small: 0.T_n + 2^-n must be below t = " +
                            cert.t.str());
  }
  if (s.total() < cert.k0) throw PreconditionError("census ends before k0");

  GrowingPrefix g(h, Temperature(r.to_rational()));
  WitnessReport rep;
  rep.T = h.T();
  rep.n = n;
  for (std::size_t m = 1;; ++m) {
    const Dyadic hm = upper.at(m);
    const PrefixValues& pv = g.at_precision(static_cast<unsigned>(m) + 32);
    const auto exceeds = [&](const mpz_class& k) { return hm < pv.at(k).lo(); };
    if (!exceeds(s.total())) continue;
    rep.k_e = first_true(cert.k0, s.total(), exceeds);
    rep.m_e = m;
    break;
  }

  // |p| - c T log2|p| > T (n - a - b) holds for the true T; T_n <= T < r
  // turns it into a statement about known numbers.
  const long slack = static_cast<long>(n) - static_cast<long>(cert.a) - static_cast<long>(cert.b);
  rep.length_threshold = (slack >= 0 ? Tn : r) * Dyadic(slack);
  rep.verified_through = std::min<mpz_class>(rep.k_e * verify_factor, s.total());
  for (const auto l : lengths_between(s, rep.k_e, rep.verified_through)) {
    if (cert.c == 0) {
      if (Dyadic(static_cast<long>(l)) <= rep.length_threshold) {
        throw CertificationError("program of length " + std::to_string(l) + " past k_e violates the length bound");
      }
      continue;
    }
    with_escalation(h.precision(), "length bound", [&](unsigned p, Audit& audit) {
      const Enclosure lhs = len(l) - Enclosure(Dyadic(static_cast<long>(cert.c))) * Tn * log2(len(l), p);
      const Check c = rep.length_threshold < lhs.lo()   ? Check::holds
                      : lhs.hi() <= rep.length_threshold ? Check::violated
                                                         : Check::unresolved;
      audit.require(c, "program of length " + std::to_string(l) + " past k_e violates the length bound");
    });
  }

  if (s.programs().size() < rep.k_e) {
    throw PreconditionError("witness needs the first " + rep.k_e.get_str() + " programs listed; only " +
                            std::to_string(s.programs().size()) + " are");
  }
  std::set<BitString> outputs;
  for (std::size_t i = 0; i < rep.k_e; ++i) outputs.insert(s.programs()[i].output);
  // Shortlex walk: lengths in order, then numerals in order.
  for (std::size_t width = 0;; ++width) {
    const mpz_class count = mpz_class(1) << static_cast<mp_bitcnt_t>(width);
    bool found = false;
    for (mpz_class v = 0; v < count; ++v) {
      BitString candidate = width == 0 ? BitString() : BitString::binary(v, width);
      if (!outputs.contains(candidate)) {
        rep.witness = std::move(candidate);
        found = true;
        break;
      }
    }
    if (found) break;
  }
  return rep;
}

SemidecisionReport semidecide_above(const QuantityHandle& h, const Dyadic& r, Oracle& upper, std::size_t budget) {
  const EnsembleSnapshot& s = h.snapshot();
  const ConditionCertificate& cert = h.certificate();
  if (r.sign() <= 0 || compare(r, cert.t.value()) >= 0) {
    throw PreconditionError("r = " + r.str() + " is outside the window (0, " + cert.t.str() + ")");
  }
  SemidecisionReport rep;
  if (s.total() < cert.k0) return rep;
  GrowingPrefix g(h, Temperature(r.to_rational()));
  for (std::size_t m = 1; m <= budget; ++m) {
    const auto hm = upper.try_at(m);
    if (!hm) break;
    const PrefixValues& pv = g.at_precision(static_cast<unsigned>(m) + 32);
    const auto exceeds = [&](const mpz_class& k) { return *hm < pv.at(k).lo(); };
    if (exceeds(s.total())) {
      rep.answer = Semidecision::yes;
      rep.m = m;
      rep.k = first_true(cert.k0, s.total(), exceeds);
      return rep;
    }
  }
  return rep;
}

Enclosure beta_value(const QuantityHandle& h, const Temperature& u, unsigned precision) {
  const EnsembleSnapshot& s = h.snapshot();
  switch (h.certificate().b_upper) {
    case 0:
      if (auto Z = closed_form_Z(s.spec(), u, precision + kGuard)) return *Z;
      return eval_limit(s, u, precision).Z;
    case 1: return eval_limit(s, u, precision).W;
    default: throw PreconditionError("β is only defined for increment exponents 0 and 1");
  }
}

namespace {

std::size_t beta_length(const Rational& T, const Rational& u, unsigned n) {
  const Rational x = T * n / u;
  mpz_class j;
  mpz_cdiv_q(j.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return j.get_ui();
}

}  // namespace

BitString beta_prefix(const QuantityHandle& h, const Temperature& u, unsigned n) {
  const std::size_t j = beta_length(h.T().value(), u.value(), n);
  for (unsigned i = 0; i <= kEscalations; ++i) {
    try {
      return bits_prefix(beta_value(h, u, (h.precision() + static_cast<unsigned>(j)) << i),
                         static_cast<unsigned>(j));
    } catch (const PrecisionError&) {
      if (i == kEscalations) throw;
    }
  }
  return {};
}

ReconstructionReport reconstruct_T(const QuantityHandle& h, const Temperature& u, unsigned n,
                                   const BitString& beta_bits, Oracle& A, Oracle& B) {
  const EnsembleSnapshot& s = h.snapshot();
  const ConditionCertificate& cert = h.certificate();
  const Rational& T = h.T().value();
  if (u.value() <= T || u.value() >= 1) throw PreconditionError("u must satisfy T < u < 1");
  if (n == 0) throw PreconditionError("n must be positive");
  const std::size_t j = beta_length(T, u.value(), n);
  if (beta_bits.size() != j) {
    throw PreconditionError("β prefix must have exactly " + std::to_string(j) + " bits, got " +
                            std::to_string(beta_bits.size()));
  }
  ReconstructionReport rep;
  rep.T_true = h.T();
  rep.n = n;
  rep.u = u;
  rep.beta_bits_used = j;

  const unsigned prec = h.precision() + static_cast<unsigned>(j);
  const unsigned wp = prec + kGuard;
  std::optional<mpz_class> whole;
  for (unsigned i = 0; i <= kEscalations && !whole; ++i) {
    const Enclosure beta = beta_value(h, u, prec << i);
    if (beta.lo().floor() == beta.hi().floor()) whole = beta.lo().floor();
  }
  if (!whole) throw PrecisionError("integer part of β unresolved");
  const Dyadic target = Dyadic(*whole, 0) + binary_fraction(beta_bits);

  // Partial sums Σ_{i<=k} |p_i|^b 2^-|p_i|/u.
  const MomentTable at_u(s, u, prec);
  const Enclosure lead_u = exp2(Rational(-static_cast<long>(s.shortest_length())) / u.value(), wp);
  const unsigned bu = cert.b_upper;
  const auto beats = [&](const mpz_class& k) { return target < (lead_u * at_u.moments(k, bu)[bu]).lo(); };
  if (s.total() < cert.k0 || !beats(s.total())) {
    throw PrecisionError("β target not exceeded within the census; raise the maximum length");
  }
  rep.k_e = first_true(cert.k0, s.total(), beats);

  const std::uint32_t through = s.length_at(rep.k_e);
  for (std::size_t step = 1;; ++step) {
    const Dyadic a = A.at(step);
    const Dyadic b = B.at(step);
    if (a.sign() <= 0 || compare(a, cert.t.value()) >= 0) {
      throw PreconditionError("A oracle value " + a.str() + " is outside (0, t)");
    }
    const PrefixValues pv(s, h.quantity(), Temperature(a.to_rational()), prec + static_cast<unsigned>(step),
                          through);
    if (pv.at(rep.k_e).hi() < b) {
      rep.l_e = rep.m_e = step;
      rep.candidate = a;
      break;
    }
  }
  rep.radius = Dyadic::pow2(static_cast<std::int64_t>(cert.a_lower) + cert.c_upper - static_cast<std::int64_t>(n));

  // Σ_{i>k_e} ℓ^p 2^-ℓ/T with p = b u/T, over the census and beyond it.
  const Rational p = Rational(bu) * u.value() / T;
  Enclosure tail(0);
  for (const auto& g : groups(s)) {
    if (g.last <= rep.k_e) continue;
    const mpz_class count = g.last - std::max<mpz_class>(g.first - 1, rep.k_e);
    Enclosure term = exp2(Rational(-static_cast<long>(g.length)) / T, wp);
    if (bu != 0) term *= exp2(Enclosure::of(p, wp) * log2(len(g.length), wp), wp);
    tail = (tail + Enclosure(Dyadic(count, 0)) * term).round_out(wp);
  }
  mpz_class pc;
  mpz_cdiv_q(pc.get_mpz_t(), p.get_num().get_mpz_t(), p.get_den().get_mpz_t());
  const auto order = static_cast<unsigned>(pc.get_ui());
  tail += Enclosure(Dyadic(), limit_tails(s, h.T(), order, wp)[order]);
  rep.raised_tail = round(tail.hi(), prec, Rounding::up);
  return rep;
}

}  // namespace thermoait
