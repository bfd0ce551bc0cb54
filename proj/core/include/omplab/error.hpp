#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omplab {

// Base for every error the library raises. The CLI maps the concrete type to
// an exit code (see tools/omplab.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: shape mismatches, out-of-domain parameters, malformed files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IndexError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A bound was evaluated outside the range where it is defined.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Raised by the QR least-squares kernels when a diagonal entry of R falls
// below the rank tolerance.
class SingularSystemError : public Error {
 public:
  SingularSystemError(std::size_t column, const std::string& what)
      : Error(what), column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

// An exhaustive computation would exceed its enumeration budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A proven guarantee was contradicted. This always indicates a bug.
class GuaranteeViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace omplab
