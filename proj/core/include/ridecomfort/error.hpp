#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace ridecomfort {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A domain invariant does not hold. `field()` names the offending field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Not enough samples/data for the requested computation.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class EncodingError : public Error {
 public:
  using Error::Error;
};

/// Forward pass requested for a commuter without a registered head.
class UnregisteredCommuterError : public Error {
 public:
  using Error::Error;
};

/// A metric is undefined for the given input (single class, zero variance).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace ridecomfort
