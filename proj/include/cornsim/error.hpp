#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cornsim {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when one applies.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a domain invariant.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Bad run configuration or usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (singular design, optimizer non-convergence, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cornsim
