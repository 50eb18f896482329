#pragma once

#include "thermoait/enclosure.hpp"

namespace thermoait {

/// Enclosure of ln 2 with at least `precision` correct bits.
Enclosure ln2(unsigned precision);

/// Certified enclosure of 2^x for rational x.
///
/// Integer x is returned exactly. Otherwise x is split as n + f with
/// f in (0,1); e^{f ln 2} is evaluated by a Taylor series on an argument
/// scaled down by 2^-10 with an explicit remainder term, then squared back,
/// every step rounded in the direction of the bound being computed. The
/// width is at most 2^-precision · max(1, 2^x).
Enclosure exp2(const Rational& x, unsigned precision);
/// 2^x over an interval argument (monotone, so endpoint-wise).
Enclosure exp2(const Enclosure& x, unsigned precision);

/// Certified enclosure of log2 over every point of v. Requires v.lo > 0.
Enclosure log2(const Enclosure& v, unsigned precision);

/// log2(1 + x) for x >= 0, accurate in relative terms for tiny x.
Enclosure log2_1p(const Enclosure& x, unsigned precision);

}  // namespace thermoait
