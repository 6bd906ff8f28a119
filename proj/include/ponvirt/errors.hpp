#pragma once

#include <stdexcept>
#include <string>

namespace ponvirt {

// Base class for every error raised by the library. `kind()` is a short
// machine-readable tag used by the command line tool.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

class ModelError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "model"; }
};

class ValidationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "validation"; }
};

class CapacityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "capacity"; }
};

// Search budget of the exact engine exhausted.
class ResourceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "resource"; }
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "infeasible"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

}  // namespace ponvirt
