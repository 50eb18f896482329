#pragma once

#include <string>
#include <string_view>

#include "thermoait/enclosure.hpp"

namespace thermoait {

/// Largest temperature accepted anywhere (divergence studies probe above 1).
inline const Rational kMaxProbeTemperature{2};

/// Positive exact temperature.
///
/// Temperatures entered by users are dyadic, but T/n (power-sum identities)
/// and probes such as 11/10 are not, so the value is an exact rational.
class Temperature {
 public:
  explicit Temperature(Rational value);
  Temperature(long num, long den) : Temperature(Rational(num, den)) {}

  /// `p/q` or a binary literal such as `0.011`.
  static Temperature parse(std::string_view text);

  const Rational& value() const noexcept { return value_; }
  Enclosure enclosure(unsigned precision) const { return Enclosure::of(value_, precision); }
  bool is_dyadic() const;
  std::string str() const;

  /// Throws PreconditionError unless 0 < T < 1.
  void require_unit_interval(std::string_view context) const;
  /// Throws PreconditionError unless 0 < T < kMaxProbeTemperature.
  void require_probe_range(std::string_view context) const;

  friend bool operator==(const Temperature& a, const Temperature& b) { return a.value_ == b.value_; }
  friend auto operator<=>(const Temperature& a, const Temperature& b) { return cmp(a.value_, b.value_) <=> 0; }

 private:
  Rational value_;
};

}  // namespace thermoait
