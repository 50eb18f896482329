#include "thermoait/closed_form.hpp"

#include <algorithm>

#include "thermoait/elementary.hpp"

namespace thermoait {
namespace {

struct Rational2 {
  Enclosure num;
  Enclosure den;
};

std::optional<Rational2> z_parts(const EnsembleSpec& spec, const Rational& T, unsigned wp) {
  switch (spec.kind) {
    case EnsembleKind::geometric: {
      const Enclosure x = exp2(Rational(-1) / T, wp);
      return Rational2{exp2(Rational(-static_cast<long>(spec.base)) / T, wp), Enclosure(1) - x};
    }
    case EnsembleKind::literal: {
      const Enclosure x = exp2(Rational(-1) / T, wp);
      return Rational2{x, Enclosure(1) - exp2(1 - Rational(2) / T, wp)};
    }
    case EnsembleKind::sdm4: {
      const Enclosure y = exp2(Rational(-2) / T, wp);
      return Rational2{y, Enclosure(1) - y.ldexp(1) - Enclosure(3) * square(y)};
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<Enclosure> closed_form_Z(const EnsembleSpec& spec, const Temperature& T, unsigned precision) {
  const unsigned wp = precision + 16;
  const auto parts = z_parts(spec, T.value(), wp);
  if (!parts || parts->den.lo().sign() <= 0) return std::nullopt;
  return divide(parts->num, parts->den, wp).round_out(precision + 8);
}

std::optional<Enclosure> closed_form_E(const EnsembleSpec& spec, const Temperature& T, unsigned precision) {
  const unsigned wp = precision + 16;
  const auto parts = z_parts(spec, T.value(), wp);
  if (!parts || parts->den.lo().sign() <= 0) return std::nullopt;
  Enclosure e;
  switch (spec.kind) {
    case EnsembleKind::geometric: {
      // b + x/(1-x)
      const Enclosure x = Enclosure(1) - parts->den;
      e = Enclosure(static_cast<long>(spec.base)) + divide(x, parts->den, wp);
      break;
    }
    case EnsembleKind::literal: {
      // (1+u)/(1-u), u = 2x^2
      const Enclosure u = Enclosure(1) - parts->den;
      e = divide(Enclosure(1) + u, parts->den, wp);
      break;
    }
    case EnsembleKind::sdm4: {
      // 2(1+3y^2)/(1-2y-3y^2)
      const Enclosure& y = parts->num;
      e = divide((Enclosure(1) + Enclosure(3) * square(y)).ldexp(1), parts->den, wp);
      break;
    }
    default:
      return std::nullopt;
  }
  return e.round_out(precision + 8);
}

std::optional<Enclosure> closed_form_Z_tail(const EnsembleSpec& spec, const Temperature& T, std::uint32_t L,
                                            unsigned precision) {
  if (spec.kind != EnsembleKind::geometric) return std::nullopt;
  const unsigned wp = precision + 16;
  const Enclosure x = exp2(Rational(-1) / T.value(), wp);
  const Enclosure one_minus_x = Enclosure(1) - x;
  if (one_minus_x.lo().sign() <= 0) return std::nullopt;
  // Σ_{ℓ > max(L, b-1)} x^ℓ = x^{m+1}/(1-x)
  const long m = std::max<long>(L, static_cast<long>(spec.base) - 1);
  return divide(exp2(Rational(-(m + 1)) / T.value(), wp), one_minus_x, wp).round_out(precision + 8);
}

}  // namespace thermoait
