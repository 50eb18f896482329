#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermoait/enclosure.hpp"

namespace thermoait {

/// A stream of dyadic approximations q(1), q(2), ... consumed in order.
/// Values are produced on demand and cached; asking past the end throws
/// OracleExhausted.
class Oracle {
 public:
  /// Returns the m-th value (m >= 1), or nothing when the stream has ended.
  using Generator = std::function<std::optional<Dyadic>(std::size_t m)>;

  Oracle(std::string description, Generator generator);

  /// Fixed list of values.
  static Oracle from_values(std::string description, std::vector<Dyadic> values);
  /// One dyadic per line (blank lines and '#' comments skipped).
  static Oracle from_file(const std::string& path);

  const Dyadic& at(std::size_t m);
  std::optional<Dyadic> try_at(std::size_t m);
  const std::string& description() const noexcept { return description_; }
  /// Values handed out so far.
  std::size_t consumed() const noexcept { return values_.size(); }

 private:
  std::string description_;
  Generator generator_;
  std::vector<Dyadic> values_;
  bool ended_ = false;
};

/// Produces an enclosure of the approximated real at a requested precision.
using ValueFunction = std::function<Enclosure(unsigned precision)>;

enum class Approach { from_above, from_below };

/// Oracle spec text: `closed-form` (granularity 2^-m), `grid:<step>`
/// (granularity step·2^-m) or `file:<path>`. The first two round a certified
/// enclosure of the target outward to the granularity, so the stream is
/// monotone and sound (never on the wrong side of the target). `max_terms`
/// bounds the generated streams.
Oracle make_oracle(std::string_view spec, const ValueFunction& value, Approach side, std::size_t max_terms = 256);

/// A(l) = T + (t - T)·2^-l rounded up to a dyadic: strictly inside (T, t) and
/// decreasing to T. For spec `grid:<step>` uses T + step·2^-l instead, and
/// `file:<path>` reads the values.
Oracle make_descending_oracle(std::string_view spec, const Rational& T, const Rational& t, std::size_t max_terms = 256);

}  // namespace thermoait
