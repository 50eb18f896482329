#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace thermoait {

/// Finite binary word. Ordered shortlex: by length, then lexicographically,
/// which is the canonical enumeration order of {0,1}*.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::string_view bits);

  /// Accepts the rendered form where the empty string is written "-".
  static BitString parse_rendered(std::string_view text);
  /// Binary numeral of `value` without leading zeros ("0" renders as λ when value is 0
  /// and width is 0).
  static BitString binary(const mpz_class& value, std::size_t width = 0);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool bit(std::size_t i) const { return bits_.at(i) == '1'; }

  void push_back(bool b) { bits_.push_back(b ? '1' : '0'); }
  BitString& operator+=(const BitString& other) {
    bits_ += other.bits_;
    return *this;
  }
  friend BitString operator+(BitString a, const BitString& b) { return a += b; }

  BitString substr(std::size_t pos, std::size_t len = std::string::npos) const;
  bool is_prefix_of(const BitString& other) const noexcept;

  /// Raw 0/1 characters; empty for λ.
  const std::string& str() const noexcept { return bits_; }
  /// Like str() but λ is rendered "-".
  std::string render() const { return bits_.empty() ? std::string("-") : bits_; }

  /// Value as an unsigned binary numeral (λ is 0).
  mpz_class to_integer() const;

  friend bool operator==(const BitString&, const BitString&) = default;
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept;

 private:
  std::string bits_;
};

}  // namespace thermoait
