#include "thermoait/bitstring.hpp"

#include "thermoait/error.hpp"

namespace thermoait {

BitString::BitString(std::string_view bits) : bits_(bits) {
  for (char c : bits_) {
    if (c != '0' && c != '1') {
      throw ParseError("invalid bit string '" + std::string(bits) + "'");
    }
  }
}

BitString BitString::parse_rendered(std::string_view text) {
  if (text == "-") return BitString();
  return BitString(text);
}

BitString BitString::binary(const mpz_class& value, std::size_t width) {
  if (value < 0) throw DomainError("binary: negative value");
  std::string digits = value == 0 ? std::string() : value.get_str(2);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  BitString out;
  out.bits_ = std::move(digits);
  return out;
}

BitString BitString::substr(std::size_t pos, std::size_t len) const {
  BitString out;
  out.bits_ = bits_.substr(pos, len);
  return out;
}

bool BitString::is_prefix_of(const BitString& other) const noexcept {
  return bits_.size() <= other.bits_.size() &&
         other.bits_.compare(0, bits_.size(), bits_) == 0;
}

mpz_class BitString::to_integer() const {
  if (bits_.empty()) return 0;
  return mpz_class(bits_, 2);
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept {
  if (a.size() != b.size()) return a.size() <=> b.size();
  return a.bits_.compare(b.bits_) <=> 0;
}

}  // namespace thermoait
