#pragma once

#include <optional>

#include "thermoait/enclosure.hpp"
#include "thermoait/ensemble.hpp"
#include "thermoait/temperature.hpp"

namespace thermoait {

/// Z(T) and E(T) for the ensembles whose length generating function is
/// rational: geometric (x^b/(1-x), x = 2^-1/T), literal (x/(1-2x^2)) and sdm4
/// (y/(1-2y-3y^2), y = 2^-2/T). Empty when the ensemble has no closed form or
/// the series diverges (or cannot be certified to converge) at T.
std::optional<Enclosure> closed_form_Z(const EnsembleSpec& spec, const Temperature& T, unsigned precision);
std::optional<Enclosure> closed_form_E(const EnsembleSpec& spec, const Temperature& T, unsigned precision);

/// Remainder Σ_{ℓ>L} census(ℓ) 2^-ℓ/T from the closed form, when available.
std::optional<Enclosure> closed_form_Z_tail(const EnsembleSpec& spec, const Temperature& T, std::uint32_t L,
                                            unsigned precision);

}  // namespace thermoait
