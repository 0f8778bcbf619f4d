#pragma once

#include <stdexcept>
#include <string>

namespace odeverify {

/// Caller passed arguments that violate an operation's preconditions
/// (dimension mismatch, non-finite state, out-of-range order, ...).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Experiment or integration configuration is inconsistent, e.g. an output
/// interval that is not an integer multiple of the step.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class NoExactSolutionError : public std::runtime_error {
 public:
  explicit NoExactSolutionError(const std::string& model)
      : std::runtime_error("no exact solution for model '" + model + "'") {}
};

class InsufficientDataError : public std::runtime_error {
 public:
  explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

class UnsupportedDimensionError : public std::runtime_error {
 public:
  explicit UnsupportedDimensionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace odeverify
