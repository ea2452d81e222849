#pragma once

#include <stdexcept>
#include <string>

namespace wigner {

/// Base class for every error raised by the solver library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid counts, ranges or mismatched shapes supplied by the caller.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A quadrature or series did not reach its requested tolerance.
class AccuracyError : public Error {
public:
  AccuracyError(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

private:
  double best_estimate_;
  double error_estimate_;
};

/// The time integration produced a non-finite value.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& what, long step) : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

private:
  long step_;
};

/// Requested allocation exceeds the configured memory budget.
class CapacityError : public Error {
public:
  using Error::Error;
};

/// Observable computation produced a value that cannot be physical (e.g. a
/// clearly negative variance).
class NumericQualityError : public Error {
public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace wigner
