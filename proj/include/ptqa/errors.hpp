#pragma once

#include <stdexcept>
#include <string>

namespace ptqa {

/// Invalid physical parameters or arguments outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (root finder, matrix exponential, ODE step control).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The two lowest Hermitian levels do not cross (|epsilon| >= |g|).
class NoCrossingError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Branch matching between two grid points could not be decided; refine the grid.
class AmbiguousMatchError : public NumericalError {
 public:
  AmbiguousMatchError(const std::string& what, double location)
      : NumericalError(what), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

/// Malformed job configuration or command-line input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ptqa
