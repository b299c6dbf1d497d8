#pragma once

#include <stdexcept>
#include <string>

namespace eit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or input lies outside its documented domain (bad N, odd P,
/// shape mismatch, malformed file). The CLI maps this to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// normalize() and friends received a matrix whose max-abs entry is zero.
class ZeroMatrixError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A numerical procedure failed (nonpositive conductivity, failed
/// factorization). The CLI maps this to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The Gauss-Newton normal system could not be factored.
class SingularSystemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Rejection sampling ran out of attempts.
class SamplingBudgetError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace eit
