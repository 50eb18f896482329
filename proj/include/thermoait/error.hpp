#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thermoait {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Stored or loaded data violates a structural invariant (prefix-freeness, Kraft, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An enclosure was too wide to decide a comparison; retry with more precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class OracleExhausted : public Error {
 public:
  using Error::Error;
};

/// A certified inequality failed on observed data. Indicates a bug, never a tuning issue.
class CertificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace thermoait
