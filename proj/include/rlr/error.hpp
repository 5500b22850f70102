#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rlr {

// Base of every error the library throws. The CLI maps ConfigError and
// ArgumentError raised from flag validation to exit code 2, everything else
// to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Undeclared predicate or population, empty population, malformed schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A term that does not fit the population of its argument position.
class TypingError : public Error {
 public:
  using Error::Error;
};

// Malformed text. Line and column are 1-based; zero means unknown.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column, const std::string& message);

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string source_;
  std::size_t line_;
  std::size_t column_;
};

// Inconsistent input data (overlapping example sets, unreadable files).
class DataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A ranking metric that is not defined for its input (e.g. one-class AUC).
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace rlr
