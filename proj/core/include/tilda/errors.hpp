#pragma once

#include <stdexcept>
#include <string>

namespace tilda {

// Base for every error raised by the library. The CLI maps ConfigError and
// UsageError to exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class UntrainedModelError : public Error {
 public:
  explicit UntrainedModelError(const std::string& what = "untrained model")
      : Error(what) {}
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class DivisionDomainError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace tilda
