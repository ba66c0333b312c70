#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dtinf {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input or a derived enumeration is larger than the configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Arguments are structurally incompatible (space mismatch, bad tree, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A precondition of a check does not hold (e.g. non-monotone input to a
/// monotone-only solver). Distinct from an inequality failing.
class Refused : public Error {
 public:
  using Error::Error;
};

/// Malformed function or tree text; `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dtinf
