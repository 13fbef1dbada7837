#pragma once

#include <stdexcept>
#include <string>

namespace kp {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A film offset that would make the scaled curve cross the rod axis.
class InterpenetrationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The oval-case hyperbola is undefined at zero surface tension.
class DegenerateConicError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed or inconsistent run configuration. `line` is 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace kp
