#pragma once

// Independent reference values for the tests: MPFR at high precision for
// transcendental quantities, gmpxx rationals for everything exact. Nothing
// here calls the library's own elementary functions.

#include <mpfr.h>

#include <cstdint>
#include <map>
#include <string>

#include "thermoait/enclosure.hpp"

namespace oracle {

inline constexpr mpfr_prec_t kBits = 512;

class Real {
 public:
  Real() { mpfr_init2(v_, kBits); mpfr_set_zero(v_, 1); }
  Real(const Real& o) { mpfr_init2(v_, kBits); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real& operator=(const Real& o) { mpfr_set(v_, o.v_, MPFR_RNDN); return *this; }
  ~Real() { mpfr_clear(v_); }

  static Real of(const mpq_class& q) { Real r; mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN); return r; }
  static Real of(long v) { Real r; mpfr_set_si(r.v_, v, MPFR_RNDN); return r; }
  static Real of(const thermoait::Dyadic& d) {
    Real r;
    mpfr_set_z(r.v_, d.mantissa().get_mpz_t(), MPFR_RNDN);
    mpfr_mul_2si(r.v_, r.v_, d.exponent(), MPFR_RNDN);
    return r;
  }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  friend Real operator+(const Real& a, const Real& b) { Real r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, const Real& b) { Real r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, const Real& b) { Real r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, const Real& b) { Real r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }

 private:
  mpfr_t v_;
};

inline Real exp2(const Real& x) { Real r; mpfr_exp2(r.get(), x.get(), MPFR_RNDN); return r; }
inline Real log2(const Real& x) { Real r; mpfr_log2(r.get(), x.get(), MPFR_RNDN); return r; }
inline Real ln2() { Real r; mpfr_const_log2(r.get(), MPFR_RNDN); return r; }
inline Real pow2q(const mpq_class& q) { return exp2(Real::of(q)); }

/// lo <= x <= hi up to the reference's own error. Reference values carry
/// ~500 good bits, so 2^-400 relative covers it while staying far below any
/// enclosure width under test.
inline bool inside(const thermoait::Enclosure& e, const Real& x) {
  Real mag = x;
  mpfr_abs(mag.get(), mag.get(), MPFR_RNDN);
  Real slack;
  mpfr_mul_2si(slack.get(), mag.get(), -400, MPFR_RNDN);
  return !(x + slack < Real::of(e.lo())) && !(Real::of(e.hi()) < x - slack);
}

inline std::string str(const Real& x) {
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, "%.30Rg", x.get());
  return buf;
}

// ---- closed forms, in MPFR ----

/// x = 2^-1/T. Geometric: Z = x/(1-x), E = 1/(1-x), W = x/(1-x)^2.
inline Real geometric_x(const mpq_class& T) { return pow2q(-1 / T); }
inline Real geometric_Z(const mpq_class& T) { const Real x = geometric_x(T); return x / (Real::of(1) - x); }
inline Real geometric_E(const mpq_class& T) { return Real::of(1) / (Real::of(1) - geometric_x(T)); }
inline Real geometric_W(const mpq_class& T) {
  const Real x = geometric_x(T);
  const Real d = Real::of(1) - x;
  return x / (d * d);
}

/// sdm4 with y = 2^-2/T: Z = y/(1-2y-3y^2).
inline Real sdm4_Z(const mpq_class& T) {
  const Real y = pow2q(-2 / T);
  return y / (Real::of(1) - Real::of(2) * y - Real::of(3) * y * y);
}

/// Σ_{ℓ} count(ℓ) ℓ^j 2^-ℓ/T over explicit (length, count) pairs, in MPFR.
template <typename Census>
Real moment(const Census& census, const mpq_class& T, unsigned j) {
  Real s;
  for (const auto& [len, count] : census) {
    Real term = pow2q(mpq_class(-static_cast<long>(len)) / T);
    for (unsigned i = 0; i < j; ++i) term = term * Real::of(static_cast<long>(len));
    Real c;
    mpfr_set_z(c.get(), mpz_class(count).get_mpz_t(), MPFR_RNDN);
    s = s + term * c;
  }
  return s;
}

// ---- length counts, written from the encodings ----

inline mpz_class literal_count(std::uint32_t len) {
  if (len % 2 == 0) return 0;
  return mpz_class(1) << ((len - 1) / 2);
}

inline unsigned floor_log2(std::uint64_t n) {
  unsigned lg = 0;
  while ((2ull << lg) <= n) ++lg;
  return lg;
}

inline mpz_class gamma_count(std::uint32_t len) {
  mpz_class total = 0;
  for (std::uint32_t n = 1; n <= len; ++n) {
    if (n + 2 * floor_log2(n) + 1 == len) total += mpz_class(1) << n;
  }
  return total;
}

/// sdm4 length 2m counts from the transfer recursion c_m = 2c_{m-1} + 3c_{m-2}.
inline mpz_class sdm4_count(std::uint32_t len) {
  if (len % 2 == 1 || len == 0) return 0;
  mpz_class prev = 0, cur = 1;
  for (std::uint32_t m = 2; m <= len / 2; ++m) {
    mpz_class next = 2 * cur + 3 * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

inline mpz_class geometric_count(std::uint32_t len) { return len >= 1 ? 1 : 0; }

using Counts = std::map<std::uint32_t, mpz_class>;

inline Counts counts_through(mpz_class (*count)(std::uint32_t), std::uint32_t L) {
  Counts c;
  for (std::uint32_t len = 1; len <= L; ++len) {
    mpz_class v = count(len);
    if (v != 0) c[len] = v;
  }
  return c;
}

inline mpq_class kraft_through(mpz_class (*count)(std::uint32_t), std::uint32_t L) {
  mpq_class s = 0;
  for (const auto& [len, v] : counts_through(count, L)) s += mpq_class(v, mpz_class(1) << len);
  s.canonicalize();
  return s;
}

/// Z, W, Y, F, E, S, C from the moment sums, in MPFR.
struct Quantities {
  Real Z, W, Y, F, E, S, C;
};

template <typename Census>
Quantities quantities(const Census& census, const mpq_class& T) {
  Quantities q;
  q.Z = moment(census, T, 0);
  q.W = moment(census, T, 1);
  q.Y = moment(census, T, 2);
  const Real t = Real::of(T);
  const Real lz = log2(q.Z);
  q.F = Real::of(0) - t * lz;
  q.E = q.W / q.Z;
  q.S = q.W / (t * q.Z) + lz;
  q.C = ln2() / (t * t) * (q.Y / q.Z - q.E * q.E);
  return q;
}

}  // namespace oracle
