#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "thermoait/bitstring.hpp"
#include "thermoait/elementary.hpp"
#include "thermoait/enclosure.hpp"
#include "thermoait/error.hpp"
#include "thermoait/expansion.hpp"
#include "thermoait/temperature.hpp"

using namespace thermoait;

TEST_CASE("dyadic canonical form and text round trip") {
  const Dyadic d(12, 0);
  CHECK(d.mantissa() == 3);
  CHECK(d.exponent() == 2);
  CHECK(Dyadic(0, 17) == Dyadic(0));
  CHECK(Dyadic::parse("3*2^-4") == Dyadic::exact(Rational(3, 16)));
  CHECK(Dyadic::parse("0.101") == Dyadic::exact(Rational(5, 8)));
  CHECK(Dyadic::parse("-1.01") == Dyadic::exact(Rational(-5, 4)));
  CHECK(Dyadic::parse("5/8") == Dyadic::exact(Rational(5, 8)));
  const Dyadic x = Dyadic::exact(Rational(-77, 1024));
  CHECK(Dyadic::parse(x.str()) == x);
  CHECK_THROWS_AS(Dyadic::exact(Rational(1, 3)), DomainError);
  CHECK_THROWS_AS(Dyadic::parse("1/3"), Error);
}

TEST_CASE("dyadic ring operations are exact") {
  const Dyadic a = Dyadic::exact(Rational(3, 8));
  const Dyadic b = Dyadic::exact(Rational(-5, 32));
  CHECK((a + b).to_rational() == Rational(7, 32));
  CHECK((a - b).to_rational() == Rational(17, 32));
  CHECK((a * b).to_rational() == Rational(-15, 256));
  CHECK(a.ldexp(3).to_rational() == 3);
}

TEST_CASE("directed rounding brackets the exact quotient") {
  const Dyadic lo = divide(Dyadic(1), Dyadic(3), 10, Rounding::down);
  const Dyadic hi = divide(Dyadic(1), Dyadic(3), 10, Rounding::up);
  CHECK(compare(lo, Rational(1, 3)) == std::strong_ordering::less);
  CHECK(compare(hi, Rational(1, 3)) == std::strong_ordering::greater);
  CHECK(hi - lo <= Dyadic::pow2(-10));
}

TEST_CASE("enclosure arithmetic examples") {
  CHECK(Enclosure(1) + Enclosure(2) == Enclosure(3));
  const Enclosure p = Enclosure(Dyadic(1), Dyadic(2)) * Enclosure(Dyadic(-1), Dyadic(1));
  CHECK(p.lo() == Dyadic(-2));
  CHECK(p.hi() == Dyadic(2));
  const Enclosure third = divide(Enclosure(1), Enclosure(3), 10);
  CHECK(third.contains(Rational(1, 3)));
  CHECK(third.width() <= Dyadic::pow2(-10));
  CHECK_THROWS_AS(divide(Enclosure(1), Enclosure(Dyadic(-1), Dyadic(1)), 10), DomainError);
}

TEST_CASE("exp2 at integer arguments is exact") {
  const Enclosure q = exp2(Rational(-2), 64);
  CHECK(q.is_point());
  CHECK(q.lo().to_rational() == Rational(1, 4));
  // one program of length 1 at T = 1/2
  const Rational x = Rational(-1) / Rational(1, 2);
  CHECK(exp2(x, 64) == Enclosure(Dyadic::exact(Rational(1, 4))));
}

TEST_CASE("exp2(-3/2) at 30 bits against MPFR") {
  const Enclosure e = exp2(Rational(-3, 2), 30);
  CHECK(e.width() <= Dyadic::pow2(-30));
  CHECK(oracle::inside(e, oracle::pow2q(Rational(-3, 2))));
  CHECK(e.lo().to_double() == doctest::Approx(0.35355339).epsilon(1e-8));
}

TEST_CASE("exp2 containment for 1000 random rationals against a 256-bit reference") {
  std::mt19937_64 rng(20241018);
  std::uniform_int_distribution<long> num(-4000, 4000);
  std::uniform_int_distribution<long> den(1, 997);
  for (int i = 0; i < 1000; ++i) {
    Rational x(num(rng), den(rng));
    x.canonicalize();
    const Enclosure e = exp2(x, 64);
    mpfr_t ref;
    mpfr_init2(ref, 256);
    oracle::Real rx = oracle::Real::of(x);
    mpfr_exp2(ref, rx.get(), MPFR_RNDN);
    oracle::Real r;
    mpfr_set(r.get(), ref, MPFR_RNDN);
    mpfr_clear(ref);
    // 256-bit reference: relative error below 2^-255, far inside the 2^-64 enclosure budget
    const Dyadic bound = Dyadic::pow2(-64) * (e.hi() > Dyadic(1) ? e.hi() : Dyadic(1));
    CHECK(e.width() <= bound);
    oracle::Real lo = oracle::Real::of(e.lo());
    oracle::Real hi = oracle::Real::of(e.hi());
    oracle::Real slack;
    mpfr_mul_2si(slack.get(), r.get(), -250, MPFR_RNDN);
    CHECK_FALSE(r + slack < lo);
    CHECK_FALSE(hi < r - slack);
  }
}

TEST_CASE("exp2 refinement never widens") {
  for (const Rational x : {Rational(-3, 2), Rational(7, 5), Rational(-101, 13)}) {
    Enclosure prev = exp2(x, 8);
    for (unsigned p = 16; p <= 256; p *= 2) {
      const Enclosure cur = exp2(x, p);
      CHECK(prev.contains(cur));
      prev = cur;
    }
  }
}

TEST_CASE("log2 examples") {
  CHECK(log2(Enclosure(Dyadic::exact(Rational(1, 4))), 64) == Enclosure(Dyadic(-2)));
  CHECK(log2(Enclosure(1), 64) == Enclosure(0));
  const Enclosure v = log2(Enclosure(Dyadic::exact(Rational(5, 16))), 30);
  CHECK(v.width() <= Dyadic::pow2(-28));
  CHECK(oracle::inside(v, oracle::log2(oracle::Real::of(Rational(5, 16)))));
  CHECK_THROWS_AS(log2(Enclosure(Dyadic(-1), Dyadic(1)), 64), DomainError);
  CHECK_THROWS_AS(log2(Enclosure(0), 64), DomainError);
}

TEST_CASE("log2 over a wide argument encloses every point") {
  const Enclosure arg(Dyadic::exact(Rational(3, 4)), Dyadic::exact(Rational(5, 4)));
  const Enclosure v = log2(arg, 64);
  CHECK(oracle::inside(v, oracle::log2(oracle::Real::of(Rational(3, 4)))));
  CHECK(oracle::inside(v, oracle::log2(oracle::Real::of(Rational(5, 4)))));
}

TEST_CASE("ln2 against MPFR") {
  CHECK(oracle::inside(ln2(128), oracle::ln2()));
  CHECK(ln2(128).width() <= Dyadic::pow2(-127));
}

TEST_CASE("bits_prefix follows the terminating-expansion convention") {
  CHECK(bits_prefix(Rational(5, 8), 6).str() == "101000");
  CHECK(bits_prefix(Rational(1, 2), 3).str() == "100");
  CHECK(bits_prefix(Rational(13, 8), 3).str() == "101");
}

TEST_CASE("bits_prefix refuses an enclosure straddling a grid point") {
  const Enclosure e(approximate(Rational(374999, 1000000), 64, Rounding::down),
                    approximate(Rational(375001, 1000000), 64, Rounding::up));
  CHECK_THROWS_AS(bits_prefix(e, 3), PrecisionError);
  CHECK(bits_prefix(e, 1).str() == "0");
}

TEST_CASE("bits_prefix brackets the value from below") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> num(0, 100000);
  for (int i = 0; i < 200; ++i) {
    Rational alpha(num(rng), 100003);
    alpha.canonicalize();
    for (unsigned n : {1u, 5u, 17u, 40u}) {
      const Rational lower = binary_fraction(bits_prefix(alpha, n)).to_rational();
      CHECK(lower <= alpha);
      CHECK(alpha < lower + Dyadic::pow2(-static_cast<std::int64_t>(n)).to_rational());
    }
  }
}

TEST_CASE("bitstring shortlex order") {
  CHECK(BitString("") < BitString("0"));
  CHECK(BitString("1") < BitString("00"));
  CHECK(BitString("01") < BitString("10"));
  CHECK(BitString::parse_rendered("-").empty());
  CHECK(BitString("110").to_integer() == 6);
}

TEST_CASE("temperature parsing and range checks") {
  CHECK(Temperature::parse("1/2").value() == Rational(1, 2));
  CHECK(Temperature::parse("0.011").value() == Rational(3, 8));
  CHECK_THROWS_AS(Temperature(Rational(0)), Error);
  CHECK_THROWS_AS(Temperature(3, 2).require_unit_interval("test"), PreconditionError);
}
