#include "thermoait/temperature.hpp"

#include "thermoait/error.hpp"

namespace thermoait {

Temperature::Temperature(Rational value) : value_(std::move(value)) {
  value_.canonicalize();
  if (value_ <= 0) throw PreconditionError("temperature must be positive, got " + to_string(value_));
}

Temperature Temperature::parse(std::string_view text) { return Temperature(parse_rational(text)); }

bool Temperature::is_dyadic() const {
  return mpz_popcount(value_.get_den().get_mpz_t()) == 1;
}

std::string Temperature::str() const { return to_string(value_); }

void Temperature::require_unit_interval(std::string_view context) const {
  if (value_ >= 1) {
    throw PreconditionError(std::string(context) + ": temperature must lie in (0,1), got " + str());
  }
}

void Temperature::require_probe_range(std::string_view context) const {
  if (value_ >= kMaxProbeTemperature) {
    throw PreconditionError(std::string(context) + ": temperature must lie in (0," +
                            to_string(kMaxProbeTemperature) + "), got " + str());
  }
}

}  // namespace thermoait
