#include "thermoait/enclosure.hpp"

#include <algorithm>

#include "thermoait/error.hpp"

namespace thermoait {

Enclosure::Enclosure(Dyadic point) : lo_(point), hi_(std::move(point)) {}

Enclosure::Enclosure(Dyadic lo, Dyadic hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) throw DomainError("enclosure with lo > hi: " + lo_.str() + " > " + hi_.str());
}

Enclosure Enclosure::of(const Rational& q, unsigned precision) {
  return {approximate(q, precision, Rounding::down), approximate(q, precision, Rounding::up)};
}

Dyadic Enclosure::magnitude() const {
  const Dyadic a = lo_.sign() < 0 ? -lo_ : lo_;
  const Dyadic b = hi_.sign() < 0 ? -hi_ : hi_;
  return std::max(a, b);
}

bool Enclosure::contains(const Rational& q) const {
  return compare(lo_, q) <= 0 && compare(hi_, q) >= 0;
}

Enclosure Enclosure::round_out(unsigned precision) const {
  return {round(lo_, precision, Rounding::down), round(hi_, precision, Rounding::up)};
}

Enclosure Enclosure::hull(const Enclosure& other) const {
  return {std::min(lo_, other.lo_), std::max(hi_, other.hi_)};
}

Enclosure Enclosure::clamp_below(const Dyadic& floor) const {
  if (hi_ < floor) throw DomainError("clamp_below: enclosure lies entirely below the floor");
  return {std::max(lo_, floor), hi_};
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo_ + b.lo_, a.hi_ + b.hi_}; }

Enclosure operator-(const Enclosure& a, const Enclosure& b) { return {a.lo_ - b.hi_, a.hi_ - b.lo_}; }

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  if (a.lo_.sign() >= 0 && b.lo_.sign() >= 0) return {a.lo_ * b.lo_, a.hi_ * b.hi_};
  const Dyadic p1 = a.lo_ * b.lo_;
  const Dyadic p2 = a.lo_ * b.hi_;
  const Dyadic p3 = a.hi_ * b.lo_;
  const Dyadic p4 = a.hi_ * b.hi_;
  return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

std::string Enclosure::str() const { return "[" + lo_.str() + ", " + hi_.str() + "]"; }

std::string Enclosure::decimal(int digits) const {
  return "[" + to_decimal(lo_, digits, Rounding::down) + ", " + to_decimal(hi_, digits, Rounding::up) + "]";
}

Enclosure divide(const Enclosure& a, const Enclosure& b, unsigned precision) {
  if (b.lo().sign() <= 0 && b.hi().sign() >= 0) {
    throw DomainError("division by an enclosure containing zero: " + b.str());
  }
  const Dyadic* ends_a[2] = {&a.lo(), &a.hi()};
  const Dyadic* ends_b[2] = {&b.lo(), &b.hi()};
  Dyadic lo;
  Dyadic hi;
  bool first = true;
  for (const Dyadic* x : ends_a) {
    for (const Dyadic* y : ends_b) {
      Dyadic d = divide(*x, *y, precision, Rounding::down);
      Dyadic u = divide(*x, *y, precision, Rounding::up);
      if (first) {
        lo = std::move(d);
        hi = std::move(u);
        first = false;
      } else {
        lo = std::min(lo, d);
        hi = std::max(hi, u);
      }
    }
  }
  return {lo, hi};
}

Enclosure square(const Enclosure& a) {
  const Dyadic l2 = a.lo() * a.lo();
  const Dyadic h2 = a.hi() * a.hi();
  if (a.lo().sign() >= 0) return {l2, h2};
  if (a.hi().sign() <= 0) return {h2, l2};
  return {Dyadic(), std::max(l2, h2)};
}

Enclosure power(const Enclosure& a, unsigned n) {
  Enclosure result(1);
  Enclosure base = a;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n > 0) base = square(base);
  }
  return result;
}

Order compare(const Enclosure& a, const Enclosure& b) {
  if (a.hi() < b.lo()) return Order::less;
  if (a.lo() > b.hi()) return Order::greater;
  return Order::unresolved;
}

}  // namespace thermoait
