#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdw {

/// Base class of every exception raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Elementary function evaluated outside its domain (ln of a non-positive value, 1/0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Request for a jet coefficient or derivative beyond the stored truncation order.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// Jets with incompatible layouts were combined.
class LayoutError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class SingularMetricError : public Error {
 public:
  using Error::Error;
};

/// Integrator blow-up, non-finite state, singular linear system, non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Two points of a geodesic are conjugate, so the two-point functions are undefined there.
class ConjugatePointError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Invalid scenario or field definition (non-hermitian B, asymmetric metric, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace sdw
