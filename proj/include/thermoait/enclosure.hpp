#pragma once

#include <string>

#include "thermoait/dyadic.hpp"

namespace thermoait {

/// Default working precision in significant bits.
inline constexpr unsigned kDefaultPrecision = 64;

/// Certified interval [lo, hi] of dyadics known to contain some real value.
///
/// Ring operations are exact (dyadics are closed under them) and therefore
/// grow mantissas; evaluators call round_out() to bound the size. Division and
/// transcendental functions take an explicit precision and round outward.
class Enclosure {
 public:
  Enclosure() = default;
  Enclosure(Dyadic point);  // NOLINT(google-explicit-constructor)
  Enclosure(long point) : Enclosure(Dyadic(point)) {}  // NOLINT(google-explicit-constructor)
  Enclosure(Dyadic lo, Dyadic hi);

  static Enclosure of(const Rational& q, unsigned precision);

  const Dyadic& lo() const noexcept { return lo_; }
  const Dyadic& hi() const noexcept { return hi_; }
  Dyadic width() const { return hi_ - lo_; }
  Dyadic midpoint() const { return (lo_ + hi_).ldexp(-1); }
  /// max(|lo|, |hi|)
  Dyadic magnitude() const;

  bool is_point() const { return lo_ == hi_; }
  bool contains(const Dyadic& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Rational& q) const;
  bool contains(const Enclosure& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }
  bool overlaps(const Enclosure& other) const { return lo_ <= other.hi_ && other.lo_ <= hi_; }

  Enclosure round_out(unsigned precision) const;
  Enclosure ldexp(std::int64_t k) const { return {lo_.ldexp(k), hi_.ldexp(k)}; }
  Enclosure hull(const Enclosure& other) const;
  /// Intersection with [floor, +inf); used where a sign is known a priori.
  Enclosure clamp_below(const Dyadic& floor) const;

  Enclosure operator-() const { return {-hi_, -lo_}; }
  friend Enclosure operator+(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator-(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator*(const Enclosure& a, const Enclosure& b);
  Enclosure& operator+=(const Enclosure& b) { return *this = *this + b; }
  Enclosure& operator-=(const Enclosure& b) { return *this = *this - b; }
  Enclosure& operator*=(const Enclosure& b) { return *this = *this * b; }

  friend bool operator==(const Enclosure&, const Enclosure&) = default;

  /// `[lo, hi]` in canonical dyadic text.
  std::string str() const;
  std::string decimal(int digits = 17) const;

 private:
  Dyadic lo_;
  Dyadic hi_;
};

/// Outward-rounded quotient. Throws DomainError when the denominator contains 0.
Enclosure divide(const Enclosure& a, const Enclosure& b, unsigned precision);
/// Tight square (nonnegative even when the argument straddles 0).
Enclosure square(const Enclosure& a);
Enclosure power(const Enclosure& a, unsigned n);

enum class Order { less, greater, unresolved };

/// Certified comparison: `less` iff a.hi < b.lo, `greater` iff a.lo > b.hi.
Order compare(const Enclosure& a, const Enclosure& b);

}  // namespace thermoait
