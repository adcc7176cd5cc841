#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcvsim {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric argument is outside its mathematical domain (NaN, Inf, sign).
class InputDomainError : public Error {
 public:
  using Error::Error;
};

/// A parameter set or table violates its invariants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A file could not be parsed; carries the 1-based line where it failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A sensor reading is physically impossible (e.g. non-positive range).
class SensorFaultError : public Error {
 public:
  using Error::Error;
};

/// Wire payload has the wrong size or an out-of-range field value.
class FramingError : public Error {
 public:
  using Error::Error;
};

/// A bridge lookup failed (identifier absent from the mapping table).
class MappingError : public Error {
 public:
  using Error::Error;
};

/// Geometry degenerated below what an operation can handle.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// A trace is missing columns an evaluation needs.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Integration produced a non-finite state; carries the failing step.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step_index)
      : Error(what + " at step " + std::to_string(step_index)),
        step_index_(step_index) {}
  std::size_t step_index() const { return step_index_; }

 private:
  std::size_t step_index_;
};

}  // namespace lcvsim
