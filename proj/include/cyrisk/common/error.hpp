#pragma once

#include <stdexcept>
#include <string>

namespace cyrisk {

// Bad argument values (negative densities, alpha outside (0,1], ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested work exceeds a hard cap (e.g. Ginibre matrix dimension).
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every candidate pattern in the association step was empty.
class NoCoverage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Premium search exhausted its bracket without meeting the target.
class CalibrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent scenario configuration; message names the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cyrisk
