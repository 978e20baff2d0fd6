#pragma once

#include <stdexcept>
#include <string>

namespace nagumo {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent configuration input (CLI exit code 2).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Any failure of a numerical procedure (CLI exit code 3).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

/// Adaptive stepping collapsed; carries the last time reached successfully.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double last_good_time)
      : NumericalError(what), last_good_time(last_good_time) {}
  double last_good_time;
};

/// A trajectory came within the angular floor of the reference point, so the
/// winding angle is undefined there.
class AngleUndefinedError : public NumericalError {
 public:
  AngleUndefinedError(const std::string& what, double time)
      : NumericalError(what), time(time) {}
  double time;
};

/// A bracketing or radius search exhausted its budget.
class SearchError : public NumericalError {
 public:
  explicit SearchError(const std::string& what) : NumericalError(what) {}
};

/// A structural hypothesis of the method is violated by the supplied data
/// (sign pattern, missing equilibrium, inadmissible level, ...).
class HypothesisError : public NumericalError {
 public:
  explicit HypothesisError(const std::string& what) : NumericalError(what) {}
};

}  // namespace nagumo
