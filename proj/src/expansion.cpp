#include "thermoait/expansion.hpp"

#include "thermoait/error.hpp"

namespace thermoait {
namespace {

// floor(α·2^n) − floor(α)·2^n, i.e. the integer whose n-bit numeral is α_n.
mpz_class scaled_fraction(const Rational& alpha, unsigned n) {
  mpz_class whole;
  mpz_fdiv_q(whole.get_mpz_t(), alpha.get_num().get_mpz_t(), alpha.get_den().get_mpz_t());
  mpz_class num = alpha.get_num();
  num <<= n;
  mpz_class scaled;
  mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), alpha.get_den().get_mpz_t());
  return scaled - (whole << n);
}

}  // namespace

BitString bits_prefix(const Rational& alpha, unsigned n) {
  return BitString::binary(scaled_fraction(alpha, n), n);
}

BitString bits_prefix(const Dyadic& alpha, unsigned n) { return bits_prefix(alpha.to_rational(), n); }

BitString bits_prefix(const Enclosure& alpha, unsigned n) {
  // Every point of [lo, hi] shares the prefix iff floor(x·2^n) is constant on it.
  const mpz_class lo_scaled = alpha.lo().ldexp(n).floor();
  const mpz_class hi_scaled = alpha.hi().ldexp(n).floor();
  if (lo_scaled != hi_scaled) {
    throw PrecisionError("enclosure " + alpha.str() + " straddles a multiple of 2^-" + std::to_string(n) +
                         "; need more precision");
  }
  return bits_prefix(alpha.lo(), n);
}

Dyadic binary_fraction(const BitString& bits) {
  return Dyadic(bits.to_integer(), -static_cast<std::int64_t>(bits.size()));
}

}  // namespace thermoait
