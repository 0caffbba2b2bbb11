#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ckmflag {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input: wrong shapes, non-finite values,
/// unsupported dimensions. The CLI maps these to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotImplementedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numeric failure on well-formed input: singular pivots, gauge
/// singularities, violated exact identities. The CLI maps these to
/// exit code 2.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A leading principal minor vanished during an unpivoted factorization.
/// minor_index() is the 1-based order of the offending minor.
class SingularPivotError : public NumericError {
 public:
  SingularPivotError(std::size_t minor_index, const std::string& what)
      : NumericError(what), minor_index_(minor_index) {}
  std::size_t minor_index() const noexcept { return minor_index_; }

 private:
  std::size_t minor_index_;
};

/// The input lies outside the single coordinate chart in use (a leading
/// principal minor of the unitary vanishes).
class GaugeSingularError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// The requested conversion has no solution under the fixed branch
/// conventions (e.g. an angle decomposition of coordinates with
/// complex z).
class NotRepresentableError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A quantity that should satisfy an exact structural identity failed
/// to do so beyond tolerance.
class InvariantViolationError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace ckmflag
