#include "thermoait/thermo.hpp"

#include <algorithm>
#include <cmath>

#include "thermoait/closed_form.hpp"
#include "thermoait/elementary.hpp"
#include "thermoait/error.hpp"

namespace thermoait {
namespace {

constexpr unsigned kGuard = 16;

Enclosure count_times(const mpz_class& count, const Enclosure& x) { return Enclosure(Dyadic(count, 0)) * x; }

Enclosure length_power(std::uint32_t length, unsigned j) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), length, j);
  return Dyadic(p, 0);
}

void require_positive_below(const Temperature& T, const Rational& bound, std::string_view context) {
  if (T.value() >= bound) {
    throw PreconditionError(std::string(context) + ": temperature " + T.str() + " must be below " + to_string(bound));
  }
}

Enclosure inverse_T(const Rational& T, unsigned wp) { return Enclosure::of(1 / T, wp); }

Enclosure heat_factor(const Rational& T, unsigned wp) {
  return divide(ln2(wp), Enclosure::of(T * T, wp), wp);
}

// Relative tails: Σ_{ℓ>L} count ℓ^j v_ℓ <= 2^{ℓ1/T} · (absolute tail).
std::vector<Enclosure> relative_tails(const EnsembleSnapshot& s, const Temperature& T, unsigned order, unsigned wp) {
  const std::vector<Dyadic> abs_tails = limit_tails(s, T, order, wp);
  const Dyadic scale = exp2(Rational(s.shortest_length()) / T.value(), wp).hi();
  std::vector<Enclosure> out;
  for (const auto& t : abs_tails) out.emplace_back(Dyadic(), round(t * scale, wp, Rounding::up));
  return out;
}

struct LimitMoments {
  MomentTable table;
  std::vector<Enclosure> R;
  std::vector<Enclosure> tails;
};

LimitMoments limit_moments(const EnsembleSnapshot& s, const Temperature& T, unsigned order, unsigned precision) {
  T.require_unit_interval("limit evaluation");
  const unsigned wp = precision + kGuard;
  MomentTable table(s, T, precision);
  std::vector<Enclosure> R = table.moments(table.rows(), order);
  std::vector<Enclosure> tails = relative_tails(s, T, order, wp);
  for (unsigned j = 0; j <= order; ++j) R[j] = (R[j] + tails[j]).round_out(wp);
  return {std::move(table), std::move(R), std::move(tails)};
}

}  // namespace

std::string_view quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Z: return "Z";
    case Quantity::W: return "W";
    case Quantity::Y: return "Y";
    case Quantity::F: return "F";
    case Quantity::E: return "E";
    case Quantity::S: return "S";
    case Quantity::C: return "C";
  }
  return "?";
}

const Enclosure& ThermoEvaluation::get(Quantity q) const {
  switch (q) {
    case Quantity::Z: return Z;
    case Quantity::W: return W;
    case Quantity::Y: return Y;
    case Quantity::F: return F;
    case Quantity::E: return E;
    case Quantity::S: return S;
    case Quantity::C: return C;
  }
  return Z;
}

MomentTable::MomentTable(const EnsembleSnapshot& snapshot, const Temperature& T, unsigned precision,
                         std::optional<std::uint32_t> through_length)
    : T_(T), precision_(precision), l1_(snapshot.shortest_length()) {
  const unsigned wp = precision + kGuard;
  mpz_class seen = 0;
  for (const auto& [len, count] : snapshot.census()) {
    if (through_length && len > *through_length) break;
    rows_.push_back({len, count, exp2(Rational(-static_cast<long>(len - l1_)) / T.value(), wp)});
    seen += count;
    cumulative_.push_back(seen);
  }
}

std::vector<MomentTable::Row> MomentTable::rows_through(const mpz_class& k) const {
  if (k < 1 || cumulative_.empty() || k > cumulative_.back()) {
    throw PreconditionError("k = " + k.get_str() + " is outside the tabulated census");
  }
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), k);
  const auto last = static_cast<std::size_t>(it - cumulative_.begin());
  std::vector<Row> out(rows_.begin(), rows_.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  out.back().count -= cumulative_[last] - k;
  return out;
}

std::vector<Enclosure> MomentTable::moments(const mpz_class& k, unsigned order) const {
  return moments(rows_through(k), order);
}

std::vector<Enclosure> MomentTable::moments(const std::vector<Row>& rows, unsigned order) const {
  const unsigned wp = precision_ + kGuard;
  std::vector<Enclosure> R(order + 1, Enclosure(0));
  for (const auto& row : rows) {
    const Enclosure base = count_times(row.count, row.v).round_out(wp);
    for (unsigned j = 0; j <= order; ++j) R[j] = (R[j] + length_power(row.length, j) * base).round_out(wp);
  }
  return R;
}

DerivedQuantities derive(const std::vector<Enclosure>& R, std::uint32_t l1, const Rational& T, unsigned precision) {
  const unsigned wp = precision + kGuard;
  const Enclosure Tq = Enclosure::of(T, wp);
  const Enclosure lg = log2(R[0], wp);
  const Enclosure l1e(static_cast<long>(l1));
  DerivedQuantities d;
  d.F = (l1e - Tq * lg).round_out(precision + 8);
  const Enclosure E = divide(R[1], R[0], wp);
  d.E = E.round_out(precision + 8);
  d.S = ((E - l1e) * inverse_T(T, wp) + lg).round_out(precision + 8).clamp_below(Dyadic());
  const Enclosure var = divide(R[2], R[0], wp) - square(E);
  d.C = (heat_factor(T, wp) * var).round_out(precision + 8).clamp_below(Dyadic());
  return d;
}

Enclosure weighted_sum(const std::vector<LengthCount>& lengths, const Rational& scale, unsigned j, unsigned precision) {
  const unsigned wp = precision + kGuard;
  Enclosure sum(0);
  for (const auto& lc : lengths) {
    const Enclosure w = exp2(-Rational(static_cast<long>(lc.length)) * scale, wp);
    sum = (sum + length_power(lc.length, j) * count_times(lc.count, w)).round_out(wp);
  }
  return sum.round_out(precision + 8);
}

ThermoEvaluation eval_partial(const EnsembleSnapshot& s, const Temperature& T, const mpz_class& k,
                              unsigned precision) {
  T.require_probe_range("eval_partial");
  const std::vector<LengthCount> lengths = s.lengths_through(k);
  const Rational inv = 1 / T.value();
  ThermoEvaluation ev;
  ev.T = T;
  ev.extent = Extent::partial;
  ev.k = k;
  ev.tail_length = lengths.back().length;
  ev.Z = weighted_sum(lengths, inv, 0, precision);
  ev.W = weighted_sum(lengths, inv, 1, precision);
  ev.Y = weighted_sum(lengths, inv, 2, precision);
  const MomentTable table(s, T, precision, lengths.back().length);
  const DerivedQuantities d = derive(table.moments(k, 2), table.shortest(), T.value(), precision);
  ev.F = d.F;
  ev.E = d.E;
  ev.S = d.S;
  ev.C = d.C;
  ev.tail.fill(Enclosure(0));
  return ev;
}

Dyadic tail_factor(std::uint32_t L, const Rational& T, unsigned j, unsigned precision) {
  if (T <= 0 || T >= 1) throw PreconditionError("tail factor needs 0 < T < 1");
  const Rational a = 1 / T - 1;
  std::vector<std::uint64_t> candidates{static_cast<std::uint64_t>(L) + 1};
  // ℓ^j 2^{-aℓ} is log-concave, so over the integers its maximum sits next to
  // the real maximiser jT/((1-T) ln 2).
  const double peak = j * T.get_d() / ((1 - T.get_d()) * std::log(2.0));
  if (std::isfinite(peak) && peak > L) {
    const auto base = static_cast<std::int64_t>(std::floor(peak));
    for (std::int64_t c = base - 2; c <= base + 3; ++c) {
      if (c > static_cast<std::int64_t>(L)) candidates.push_back(static_cast<std::uint64_t>(c));
    }
  }
  Dyadic best;
  for (const auto c : candidates) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), c, j);
    const Dyadic v = (Enclosure(Dyadic(p, 0)) * exp2(-a * Rational(static_cast<unsigned long>(c)), precision)).hi();
    best = std::max(best, v);
  }
  return round(best, precision, Rounding::up);
}

std::vector<Dyadic> limit_tails(const EnsembleSnapshot& s, const Temperature& T, unsigned order, unsigned precision) {
  const Dyadic mass = census_tail_mass(s, s.max_length()).hi();
  std::vector<Dyadic> out;
  for (unsigned j = 0; j <= order; ++j) {
    out.push_back(mass.is_zero() ? Dyadic() : round(tail_factor(s.max_length(), T.value(), j, precision) * mass,
                                                    precision, Rounding::up));
  }
  return out;
}

ThermoEvaluation eval_limit(const EnsembleSnapshot& s, const Temperature& T, unsigned precision,
                            std::optional<Dyadic> max_width) {
  const unsigned wp = precision + kGuard;
  const LimitMoments lm = limit_moments(s, T, 2, precision);
  const std::vector<Dyadic> abs_tails = limit_tails(s, T, 2, wp);
  const std::vector<LengthCount> lengths = s.lengths_through(s.total());
  const Rational inv = 1 / T.value();

  ThermoEvaluation ev;
  ev.T = T;
  ev.extent = Extent::limit;
  ev.k = s.total();
  ev.tail_length = s.max_length();
  const Enclosure Zp = weighted_sum(lengths, inv, 0, precision);
  const Enclosure Wp = weighted_sum(lengths, inv, 1, precision);
  const Enclosure Yp = weighted_sum(lengths, inv, 2, precision);
  ev.Z = (Zp + Enclosure(Dyadic(), abs_tails[0])).round_out(precision + 8);
  ev.W = (Wp + Enclosure(Dyadic(), abs_tails[1])).round_out(precision + 8);
  ev.Y = (Yp + Enclosure(Dyadic(), abs_tails[2])).round_out(precision + 8);

  const DerivedQuantities d = derive(lm.R, lm.table.shortest(), T.value(), precision);
  const DerivedQuantities p = derive(lm.table.moments(lm.table.rows(), 2), lm.table.shortest(), T.value(), precision);
  ev.F = d.F;
  ev.E = d.E;
  ev.S = d.S;
  ev.C = d.C;
  ev.tail = {ev.Z - Zp, ev.W - Wp, ev.Y - Yp, d.F - p.F, d.E - p.E, d.S - p.S, d.C - p.C};
  for (auto& t : ev.tail) t = t.round_out(precision + 8);

  if (max_width && ev.Z.width() > *max_width) {
    throw PrecisionError("limit of Z at T=" + T.str() + " only resolvable to width " +
                         to_decimal(ev.Z.width(), 6, Rounding::up) + " with max length " +
                         std::to_string(s.max_length()));
  }
  return ev;
}

ThermoEvaluation evaluate(const EnsembleSnapshot& s, const Temperature& T, const Depth& depth, unsigned precision) {
  return depth.is_limit() ? eval_limit(s, T, precision) : eval_partial(s, T, depth.k, precision);
}

Enclosure power_sum(const EnsembleSnapshot& s, const Temperature& T, unsigned n, const mpz_class& k,
                    unsigned precision) {
  if (n < 1) throw PreconditionError("power_sum needs n >= 1");
  T.require_probe_range("power_sum");
  // (2^{-ℓ/T})^n = 2^{-ℓ n/T}
  return weighted_sum(s.lengths_through(k), Rational(n) / T.value(), 0, precision);
}

std::vector<ThermoEvaluation> sweep(const EnsembleSnapshot& s, const std::vector<Temperature>& grid,
                                    const Depth& depth, unsigned precision, bool divergence_study) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (divergence_study) {
      grid[i].require_probe_range("sweep");
    } else {
      grid[i].require_unit_interval("sweep");
    }
    if (i > 0 && !(grid[i - 1] < grid[i])) throw PreconditionError("sweep grid must be strictly increasing");
  }
  std::vector<ThermoEvaluation> out;
  out.reserve(grid.size());
  for (const auto& T : grid) out.push_back(evaluate(s, T, depth, precision));
  return out;
}

Enclosure gibbs_entropy(const EnsembleSnapshot& s, const Temperature& T, const Depth& depth, unsigned precision) {
  const unsigned wp = precision + kGuard;
  const Enclosure invT = inverse_T(T.value(), wp);
  const auto sum_rows = [&](const MomentTable& table, const std::vector<MomentTable::Row>& rows, const Enclosure& R0) {
    const Enclosure lg = log2(R0, wp);
    Enclosure sum(0);
    for (const auto& row : rows) {
      // -q log2 q with q = count·v/R0 spread over `count` programs of equal weight:
      // each has -log2(v/R0) = (ℓ-ℓ1)/T + log2 R0.
      const Enclosure q = divide(count_times(row.count, row.v), R0, wp);
      const Enclosure info = Enclosure(static_cast<long>(row.length - table.shortest())) * invT + lg;
      sum = (sum + q * info).round_out(wp);
    }
    return sum;
  };

  if (!depth.is_limit()) {
    T.require_probe_range("gibbs_entropy");
    const MomentTable table(s, T, precision, s.length_at(depth.k));
    const auto rows = table.rows_through(depth.k);
    return sum_rows(table, rows, table.moments(rows, 0)[0]).round_out(precision + 8);
  }
  const LimitMoments lm = limit_moments(s, T, 1, precision);
  const Enclosure& R0 = lm.R[0];
  const Enclosure body = sum_rows(lm.table, lm.table.rows(), R0);
  const Enclosure lg = log2(R0, wp);
  const Enclosure bound = divide(lm.tails[1] * invT + lm.tails[0] * Enclosure(lg.hi()), Enclosure(R0.lo()), wp);
  return (body + Enclosure(Dyadic(), bound.hi())).round_out(precision + 8);
}

Enclosure variance_heat(const EnsembleSnapshot& s, const Temperature& T, const Depth& depth, unsigned precision) {
  const unsigned wp = precision + kGuard;
  const auto sum_rows = [&](const std::vector<MomentTable::Row>& rows, const Enclosure& R0, const Enclosure& E) {
    Enclosure sum(0);
    for (const auto& row : rows) {
      const Enclosure q = divide(count_times(row.count, row.v), R0, wp);
      sum = (sum + q * square(Enclosure(static_cast<long>(row.length)) - E)).round_out(wp);
    }
    return sum;
  };

  if (!depth.is_limit()) {
    T.require_probe_range("variance_heat");
    const MomentTable table(s, T, precision, s.length_at(depth.k));
    const auto rows = table.rows_through(depth.k);
    const auto R = table.moments(rows, 1);
    const Enclosure E = divide(R[1], R[0], wp);
    return (heat_factor(T.value(), wp) * sum_rows(rows, R[0], E)).round_out(precision + 8);
  }
  const LimitMoments lm = limit_moments(s, T, 2, precision);
  const Enclosure E = divide(lm.R[1], lm.R[0], wp);
  const Enclosure body = sum_rows(lm.table.rows(), lm.R[0], E);
  // (ℓ - E)^2 <= ℓ^2 + E^2 for the lengths beyond the tabulated ones.
  const Enclosure Ehi(E.magnitude());
  const Enclosure bound = divide(lm.tails[2] + lm.tails[0] * square(Ehi), Enclosure(lm.R[0].lo()), wp);
  return (heat_factor(T.value(), wp) * (body + Enclosure(Dyadic(), bound.hi()))).round_out(precision + 8);
}

DivergenceReport divergence_probe(const EnsembleSpec& spec, const Temperature& T, const Rational& M,
                                  std::uint32_t cap, unsigned precision) {
  require_positive_below(T, kMaxProbeTemperature, "divergence_probe");
  if (!spec.closed_form_census()) throw PreconditionError("divergence_probe needs a closed-form census");
  const Census census = closed_census_through(spec, cap);
  const Rational inv = 1 / T.value();

  for (unsigned wp = precision + kGuard;; wp *= 2) {
    DivergenceReport report;
    report.cap = cap;
    report.partial = Enclosure(0);
    bool ambiguous = false;
    for (const auto& [len, count] : census) {
      const Enclosure w = exp2(-Rational(static_cast<long>(len)) * inv, wp);
      report.partial = (report.partial + count_times(count, w)).round_out(wp);
      const Order o = compare(report.partial, Enclosure::of(M, wp));
      if (o == Order::greater) {
        report.exceeded = true;
        report.L = len;
        break;
      }
      // Overlap is only conclusive when both sides are exact (then the sum equals M).
      if (o == Order::unresolved && !(report.partial.is_point() && Enclosure::of(M, wp).is_point())) {
        ambiguous = true;
      }
    }
    if (ambiguous && wp < 8 * (precision + kGuard)) continue;
    if (ambiguous) throw PrecisionError("divergence_probe: partial sum too close to the threshold to certify");
    if (!report.exceeded) {
      report.L = cap;
      report.limit = closed_form_Z(spec, T, precision);
      if (!report.limit && T.value() < 1) {
        const EnsembleSnapshot s = enumerate(spec, 1, cap, 0);
        report.limit = eval_limit(s, T, precision).Z;
      }
    }
    report.partial = report.partial.round_out(precision + 8);
    return report;
  }
}

std::vector<Temperature> parse_grid(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw PreconditionError("grid must look like a:b:step");
  const Rational a = parse_rational(text.substr(0, c1));
  const Rational b = parse_rational(text.substr(c1 + 1, c2 - c1 - 1));
  const Rational step = parse_rational(text.substr(c2 + 1));
  if (step <= 0) throw PreconditionError("grid step must be positive");
  if (b < a) throw PreconditionError("grid end below its start");
  std::vector<Temperature> out;
  for (Rational t = a; t <= b; t += step) out.emplace_back(t);
  return out;
}

}  // namespace thermoait
