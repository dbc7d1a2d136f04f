#pragma once

#include <stdexcept>
#include <string>

namespace grs {

// Base of every error raised by the library. The CLI maps each subclass to a
// distinct process exit code (see README).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (CSV or JSON syntax).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Table/schema contract violated (non-binary target, missing column, ...).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Argument outside its documented domain.
class ValueError : public Error {
 public:
  using Error::Error;
};

// Run configuration failed validation. `field` names the offending JSON path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Training or tuning could not produce a result.
class TuningError : public Error {
 public:
  using Error::Error;
};

// Training data holds only one class.
class SingleClassError : public TuningError {
 public:
  using TuningError::TuningError;
};

// Reading or writing an artifact on disk failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace grs
