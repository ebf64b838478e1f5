#pragma once

#include <stdexcept>
#include <string>

namespace tpump {

/// Base of every error thrown by the library. The CLI maps the subclasses
/// below onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands defined on different site counts or vector dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (Hilbert-space dimension) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A Pauli term cannot be written in the bond algebra {X_j, Z_j Z_j+1}.
class DualityError : public Error {
 public:
  using Error::Error;
};

class ReductionError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration, parameters or textual input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: lost validity, non-convergence, failed preparation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class PreparationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AmbiguityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegratorError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Band gap closes on a parameter grid.
class DegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A precondition on an argument was violated (e.g. non-Hermitian observable).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace tpump
