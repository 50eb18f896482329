#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace thermoait {

using Rational = mpq_class;

enum class Rounding { down, up };

/// Exact binary rational mantissa·2^exponent.
///
/// Always canonical: the mantissa is odd, or zero with exponent zero. Two
/// dyadics are equal iff their (mantissa, exponent) pairs are equal, so the
/// text form `m*2^e` is unique per value.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long value);  // NOLINT(google-explicit-constructor)
  Dyadic(mpz_class mantissa, std::int64_t exponent);

  static Dyadic pow2(std::int64_t k) { return Dyadic(1, k); }

  /// Parses `m*2^e`, an integer, `p/q` with q a power of two, or a binary
  /// literal such as `0.101` or `-1.01`.
  static Dyadic parse(std::string_view text);

  /// Exact conversion; throws DomainError when the denominator is not a power of two.
  static Dyadic exact(const Rational& q);

  const mpz_class& mantissa() const noexcept { return mantissa_; }
  std::int64_t exponent() const noexcept { return exponent_; }

  int sign() const noexcept { return sgn(mantissa_); }
  bool is_zero() const noexcept { return sign() == 0; }
  /// floor(log2 |x|). Requires a nonzero value.
  std::int64_t msb() const;

  Dyadic ldexp(std::int64_t k) const;
  mpz_class floor() const;
  mpz_class ceil() const;

  Rational to_rational() const;
  double to_double() const;
  /// Canonical `m*2^e` text.
  std::string str() const;

  Dyadic operator-() const;
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic& operator+=(const Dyadic& b) { return *this = *this + b; }
  Dyadic& operator-=(const Dyadic& b) { return *this = *this - b; }
  Dyadic& operator*=(const Dyadic& b) { return *this = *this * b; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  void normalize();

  mpz_class mantissa_ = 0;
  std::int64_t exponent_ = 0;
};

std::strong_ordering compare(const Dyadic& a, const Rational& q);

/// Keeps `precision` significant bits, rounding in the given direction.
Dyadic round(const Dyadic& x, unsigned precision, Rounding dir);
/// a/b with `precision` significant bits, directed. b must be nonzero.
Dyadic divide(const Dyadic& a, const Dyadic& b, unsigned precision, Rounding dir);
/// Directed dyadic approximation of a rational; exact when the denominator is a power of two.
Dyadic approximate(const Rational& q, unsigned precision, Rounding dir);

/// Decimal rendering with `digits` significant digits, rounded in `dir`.
std::string to_decimal(const Dyadic& x, int digits, Rounding dir);

std::string to_string(const Rational& q);
/// Parses `p/q`, an integer, or a binary literal into an exact rational.
Rational parse_rational(std::string_view text);

}  // namespace thermoait
