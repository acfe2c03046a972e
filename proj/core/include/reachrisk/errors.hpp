#pragma once

#include <stdexcept>
#include <string>

namespace reachrisk {

/// Linear algebra failed in a way that indicates bad conditioning or a
/// non-SPD matrix (Cholesky failure, singular innovation covariance, ...).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Division of Taylor models by an interval whose range contains zero.
class SingularDivisionError : public NumericalError {
public:
  explicit SingularDivisionError(const std::string& what) : NumericalError(what) {}
};

/// A derivative order was requested that the map cannot provide.
class UnsupportedOrderError : public std::runtime_error {
public:
  explicit UnsupportedOrderError(const std::string& what) : std::runtime_error(what) {}
};

/// The reachability iteration blew past the configured width cap; the
/// flowpipe is no longer informative beyond `last_valid_step`.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, int last_valid_step)
      : std::runtime_error(what), last_valid_step(last_valid_step) {}
  int last_valid_step;
};

/// Configuration file rejected; `field` holds the offending path, e.g.
/// "risk.correlation".
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field(field) {}
  std::string field;
};

}  // namespace reachrisk
