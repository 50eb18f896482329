#pragma once

#include "thermoait/bitstring.hpp"
#include "thermoait/enclosure.hpp"

namespace thermoait {

/// First n bits of the base-two expansion of α − ⌊α⌋, taking the expansion
/// with infinitely many zeros (so 5/8 gives 101000 for n = 6).
BitString bits_prefix(const Dyadic& alpha, unsigned n);
BitString bits_prefix(const Rational& alpha, unsigned n);

/// Same, for a value known only through an enclosure. Throws PrecisionError
/// when the enclosure straddles a multiple of 2^-n (or an integer), since the
/// prefix is then not determined.
BitString bits_prefix(const Enclosure& alpha, unsigned n);

/// The dyadic 0.b1b2...bn.
Dyadic binary_fraction(const BitString& bits);

}  // namespace thermoait
