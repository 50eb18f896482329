#include "thermoait/elementary.hpp"

#include <mutex>

#include "thermoait/error.hpp"

namespace thermoait {
namespace {

constexpr unsigned kGuardBits = 32;
constexpr unsigned kCachedLn2Bits = 1024;
constexpr int kExpReduction = 10;

bool negligible(const Dyadic& term, unsigned wp) {
  return term.is_zero() || term.msb() < -static_cast<std::int64_t>(wp) - 4;
}

// Sum of 1/(k 2^k), k >= 1, directed. Remainder after K terms is below 2^-K.
Dyadic ln2_series(unsigned wp, Rounding dir) {
  Dyadic sum;
  const unsigned terms = wp + 8;
  for (unsigned k = 1; k <= terms; ++k) {
    sum += divide(Dyadic::pow2(-static_cast<std::int64_t>(k)), Dyadic(static_cast<long>(k)), wp, dir);
  }
  if (dir == Rounding::up) sum += Dyadic::pow2(-static_cast<std::int64_t>(terms));
  return round(sum, wp, dir);
}

Enclosure compute_ln2(unsigned wp) { return {ln2_series(wp, Rounding::down), ln2_series(wp, Rounding::up)}; }

// e^z for 0 <= z < 1, rounded consistently in `dir`.
Dyadic exp_directed(const Dyadic& z, unsigned wp, Rounding dir) {
  if (z.is_zero()) return Dyadic(1);
  const Dyadic y = z.ldexp(-kExpReduction);
  Dyadic sum(1);
  Dyadic term(1);
  for (long i = 1;; ++i) {
    term = divide(round(term * y, wp, dir), Dyadic(i), wp, dir);
    sum += term;
    if (negligible(term, wp)) break;
  }
  // The tail beyond the last term is bounded by that term (ratio y/(i+1) < 1/2).
  if (dir == Rounding::up) sum += term;
  sum = round(sum, wp, dir);
  for (int i = 0; i < kExpReduction; ++i) sum = round(sum * sum, wp, dir);
  return sum;
}

// 2·atanh(z) = ln((1+z)/(1-z)) for 0 <= z <= 1/3, directed.
Dyadic atanh2_directed(const Dyadic& z, unsigned wp, Rounding dir) {
  if (z.is_zero()) return Dyadic();
  const Dyadic z2 = round(z * z, wp, dir);
  Dyadic sum = z;
  Dyadic power = z;
  Dyadic term = z;
  for (long i = 1;; ++i) {
    power = round(power * z2, wp, dir);
    term = divide(power, Dyadic(2 * i + 1), wp, dir);
    sum += term;
    if (negligible(term, wp)) break;
  }
  // Remaining terms shrink by z^2 <= 1/9 each, so they sum to less than the last one.
  if (dir == Rounding::up) sum += term;
  return round(sum.ldexp(1), wp, dir);
}

// ln(u) for 1 <= u < 2.
Dyadic ln_mantissa(const Dyadic& u, unsigned wp, Rounding dir) {
  if (u == Dyadic(1)) return Dyadic();
  const Dyadic z = divide(u - Dyadic(1), u + Dyadic(1), wp, dir);
  return atanh2_directed(z, wp, dir);
}

Dyadic log2_directed(const Dyadic& v, unsigned wp, Rounding dir) {
  const std::int64_t k = v.msb();
  const Dyadic u = v.ldexp(-k);
  const Dyadic ln_u = ln_mantissa(u, wp, dir);
  const Enclosure l2 = ln2(wp);
  const Dyadic frac = divide(ln_u, dir == Rounding::down ? l2.hi() : l2.lo(), wp, dir);
  return Dyadic(static_cast<long>(k)) + frac;
}

}  // namespace

Enclosure ln2(unsigned precision) {
  static std::once_flag once;
  static Enclosure cached;
  const unsigned wp = precision + 8;
  if (wp > kCachedLn2Bits) return compute_ln2(wp + kGuardBits).round_out(wp);
  std::call_once(once, [] { cached = compute_ln2(kCachedLn2Bits + kGuardBits); });
  return cached.round_out(wp);
}

Enclosure exp2(const Rational& x, unsigned precision) {
  mpz_class n;
  mpz_fdiv_q(n.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  if (!n.fits_slong_p()) throw DomainError("exp2: exponent out of range");
  const Dyadic scale = Dyadic::pow2(n.get_si());
  const Rational f = x - Rational(n);
  if (f == 0) return Enclosure(scale);

  const unsigned wp = precision + kGuardBits;
  const Enclosure y = (Enclosure::of(f, wp) * ln2(wp)).round_out(wp);
  const Enclosure e(exp_directed(y.lo(), wp, Rounding::down), exp_directed(y.hi(), wp, Rounding::up));
  return (e * Enclosure(scale)).round_out(precision + 8);
}

Enclosure exp2(const Enclosure& x, unsigned precision) {
  if (x.is_point()) return exp2(x.lo().to_rational(), precision);
  return {exp2(x.lo().to_rational(), precision).lo(), exp2(x.hi().to_rational(), precision).hi()};
}

Enclosure log2(const Enclosure& v, unsigned precision) {
  if (v.lo().sign() <= 0) throw DomainError("log2 of a nonpositive enclosure " + v.str());
  const unsigned wp = precision + kGuardBits;
  return Enclosure(log2_directed(v.lo(), wp, Rounding::down), log2_directed(v.hi(), wp, Rounding::up))
      .round_out(precision + 8);
}

Enclosure log2_1p(const Enclosure& x, unsigned precision) {
  if (x.lo().sign() < 0) throw DomainError("log2_1p expects a nonnegative argument");
  if (x.hi() > Dyadic(1)) return log2(x + Enclosure(1), precision);
  const unsigned wp = precision + kGuardBits;
  const auto bound = [&](const Dyadic& v, Rounding dir) {
    const Dyadic z = divide(v, v + Dyadic(2), wp, dir);
    const Enclosure l2 = ln2(wp);
    return divide(atanh2_directed(z, wp, dir), dir == Rounding::down ? l2.hi() : l2.lo(), wp, dir);
  };
  return Enclosure(bound(x.lo(), Rounding::down), bound(x.hi(), Rounding::up)).round_out(precision + 8);
}

}  // namespace thermoait
