#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace foliage {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent scenario input. Carries the 1-based line number
/// when the failure can be pinned to one (0 otherwise).
class ScenarioError : public Error {
 public:
  explicit ScenarioError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Numeric machinery could not reach a verdict (precision ceiling hit,
/// tracer drift, no admissible perturbation).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace foliage
