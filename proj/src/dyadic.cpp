#include "thermoait/dyadic.hpp"

#include <cmath>

#include "thermoait/error.hpp"

namespace thermoait {
namespace {

std::int64_t bit_length(const mpz_class& m) {
  return m == 0 ? 0 : static_cast<std::int64_t>(mpz_sizeinbase(m.get_mpz_t(), 2));
}

bool is_power_of_two(const mpz_class& v) { return v > 0 && mpz_popcount(v.get_mpz_t()) == 1; }

mpz_class shifted(const mpz_class& m, std::int64_t k) {
  mpz_class out;
  if (k >= 0) {
    mpz_mul_2exp(out.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  } else {
    mpz_fdiv_q_2exp(out.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
  }
  return out;
}

mpz_class parse_integer(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty number");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw ParseError("invalid integer '" + s + "'");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw ParseError("invalid integer '" + s + "'");
  }
  if (s[0] == '+') s.erase(0, 1);
  return mpz_class(s, 10);
}

Dyadic parse_binary_literal(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  std::string digits;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i == dot) continue;
    if (text[i] != '0' && text[i] != '1') {
      throw ParseError("invalid binary literal '" + std::string(text) + "'");
    }
    digits.push_back(text[i]);
  }
  if (digits.empty()) throw ParseError("empty binary literal");
  const auto frac_bits = static_cast<std::int64_t>(text.size() - dot - 1);
  Dyadic v(mpz_class(digits, 2), -frac_bits);
  return negative ? -v : v;
}

}  // namespace

Dyadic::Dyadic(long value) : mantissa_(value), exponent_(0) { normalize(); }

Dyadic::Dyadic(mpz_class mantissa, std::int64_t exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
  normalize();
}

void Dyadic::normalize() {
  if (mantissa_ == 0) {
    exponent_ = 0;
    return;
  }
  const auto tz = mpz_scan1(mantissa_.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_fdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), tz);
    exponent_ += static_cast<std::int64_t>(tz);
  }
}

Dyadic Dyadic::parse(std::string_view text) {
  if (text.empty()) throw ParseError("empty number");
  if (const auto star = text.find("*2^"); star != std::string_view::npos) {
    const mpz_class m = parse_integer(text.substr(0, star));
    const mpz_class e = parse_integer(text.substr(star + 3));
    if (!e.fits_slong_p()) throw ParseError("exponent out of range");
    return Dyadic(m, e.get_si());
  }
  if (text.find('/') != std::string_view::npos) {
    const Rational q = parse_rational(text);
    if (!is_power_of_two(q.get_den())) {
      throw ParseError("'" + std::string(text) + "' is not dyadic (denominator must be a power of two)");
    }
    return exact(q);
  }
  if (text.find('.') != std::string_view::npos) return parse_binary_literal(text);
  return Dyadic(parse_integer(text), 0);
}

Dyadic Dyadic::exact(const Rational& q) {
  if (!is_power_of_two(q.get_den())) throw DomainError("rational " + to_string(q) + " is not dyadic");
  return Dyadic(q.get_num(), -(bit_length(q.get_den()) - 1));
}

std::int64_t Dyadic::msb() const {
  if (is_zero()) throw DomainError("msb of zero");
  return bit_length(abs(mantissa_)) - 1 + exponent_;
}

Dyadic Dyadic::ldexp(std::int64_t k) const {
  Dyadic out = *this;
  if (!out.is_zero()) out.exponent_ += k;
  return out;
}

mpz_class Dyadic::floor() const {
  return shifted(mantissa_, exponent_);
}

mpz_class Dyadic::ceil() const {
  if (exponent_ >= 0) return shifted(mantissa_, exponent_);
  mpz_class out;
  mpz_cdiv_q_2exp(out.get_mpz_t(), mantissa_.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent_));
  return out;
}

Rational Dyadic::to_rational() const {
  Rational q;
  if (exponent_ >= 0) {
    q = Rational(shifted(mantissa_, exponent_));
  } else {
    mpz_class den = 1;
    den <<= static_cast<mp_bitcnt_t>(-exponent_);
    q = Rational(mantissa_, den);
    q.canonicalize();
  }
  return q;
}

double Dyadic::to_double() const {
  if (is_zero()) return 0.0;
  long e = 0;
  const double d = mpz_get_d_2exp(&e, mantissa_.get_mpz_t());
  const std::int64_t total = static_cast<std::int64_t>(e) + exponent_;
  if (total > 2000) return std::copysign(HUGE_VAL, d);
  if (total < -2000) return std::copysign(0.0, d);
  return std::ldexp(d, static_cast<int>(total));
}

std::string Dyadic::str() const {
  return mantissa_.get_str(10) + "*2^" + std::to_string(exponent_);
}

Dyadic Dyadic::operator-() const {
  Dyadic out = *this;
  out.mantissa_ = -out.mantissa_;
  return out;
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.exponent_ <= b.exponent_) {
    return Dyadic(a.mantissa_ + shifted(b.mantissa_, b.exponent_ - a.exponent_), a.exponent_);
  }
  return Dyadic(b.mantissa_ + shifted(a.mantissa_, a.exponent_ - b.exponent_), b.exponent_);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  return Dyadic(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  // Same nonzero sign: compare magnitudes by leading bit first.
  const std::int64_t ma = a.msb();
  const std::int64_t mb = b.msb();
  if (ma != mb) return sa > 0 ? ma <=> mb : mb <=> ma;
  const std::int64_t e = std::min(a.exponent_, b.exponent_);
  const mpz_class lhs = shifted(a.mantissa_, a.exponent_ - e);
  const mpz_class rhs = shifted(b.mantissa_, b.exponent_ - e);
  const int c = cmp(lhs, rhs);
  return c <=> 0;
}

std::strong_ordering compare(const Dyadic& a, const Rational& q) {
  const int c = cmp(a.to_rational(), q);
  return c <=> 0;
}

Dyadic round(const Dyadic& x, unsigned precision, Rounding dir) {
  const std::int64_t len = bit_length(abs(x.mantissa()));
  if (len <= static_cast<std::int64_t>(precision)) return x;
  const auto s = static_cast<mp_bitcnt_t>(len - precision);
  mpz_class m;
  if (dir == Rounding::down) {
    mpz_fdiv_q_2exp(m.get_mpz_t(), x.mantissa().get_mpz_t(), s);
  } else {
    mpz_cdiv_q_2exp(m.get_mpz_t(), x.mantissa().get_mpz_t(), s);
  }
  return Dyadic(m, x.exponent() + static_cast<std::int64_t>(s));
}

Dyadic divide(const Dyadic& a, const Dyadic& b, unsigned precision, Rounding dir) {
  if (b.is_zero()) throw DomainError("division by zero");
  if (a.is_zero()) return Dyadic();
  const std::int64_t la = bit_length(abs(a.mantissa()));
  const std::int64_t lb = bit_length(abs(b.mantissa()));
  const std::int64_t shift = std::max<std::int64_t>(0, static_cast<std::int64_t>(precision) + lb - la + 2);
  const mpz_class num = shifted(a.mantissa(), shift);
  mpz_class q;
  if (dir == Rounding::down) {
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), b.mantissa().get_mpz_t());
  } else {
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), b.mantissa().get_mpz_t());
  }
  return round(Dyadic(q, a.exponent() - b.exponent() - shift), precision, dir);
}

Dyadic approximate(const Rational& q, unsigned precision, Rounding dir) {
  if (is_power_of_two(q.get_den())) return Dyadic::exact(q);
  return divide(Dyadic(q.get_num(), 0), Dyadic(q.get_den(), 0), precision, dir);
}

std::string to_decimal(const Dyadic& x, int digits, Rounding dir) {
  if (x.is_zero()) return "0";
  const auto e10 = static_cast<long>(std::floor(static_cast<double>(x.msb()) * 0.30102999566398120));
  const long scale = digits - 1 - e10;
  mpz_class num = x.mantissa();
  mpz_class den = 1;
  if (x.exponent() >= 0) {
    num <<= static_cast<mp_bitcnt_t>(x.exponent());
  } else {
    den <<= static_cast<mp_bitcnt_t>(-x.exponent());
  }
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(scale >= 0 ? scale : -scale));
  if (scale >= 0) {
    num *= p10;
  } else {
    den *= p10;
  }
  mpz_class n;
  if (dir == Rounding::down) {
    mpz_fdiv_q(n.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  } else {
    mpz_cdiv_q(n.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  }
  std::string s = mpz_class(abs(n)).get_str(10);
  const long exponent = static_cast<long>(s.size()) - 1 - scale;
  std::string out = n < 0 ? "-" : "";
  out += s.substr(0, 1);
  if (s.size() > 1) out += "." + s.substr(1);
  out += "e" + std::to_string(exponent);
  return out;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str(10);
  return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

Rational parse_rational(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const mpz_class p = parse_integer(text.substr(0, slash));
    const mpz_class q = parse_integer(text.substr(slash + 1));
    if (q <= 0) throw ParseError("denominator must be positive in '" + std::string(text) + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  return Dyadic::parse(text).to_rational();
}

}  // namespace thermoait
