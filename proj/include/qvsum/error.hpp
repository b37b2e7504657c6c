#pragma once

#include <stdexcept>
#include <string>

namespace qvsum {

// Every library failure derives from Error. The CLI maps InputError and its
// subclasses to exit code 2 and NumericError to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace qvsum
