#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gammaforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands disagree in dimension, order, base point or matrix shape.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A scalar function was evaluated outside its domain (log of x <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Source text could not be parsed. `offset` is the byte offset of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Malformed input data that is not a grammar error (bad JSON shape, unknown name).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be inverted has a (numerically) singular value part.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double smallest_singular_value)
      : Error(what), smallest_singular_value_(smallest_singular_value) {}
  double smallest_singular_value() const noexcept { return smallest_singular_value_; }

 private:
  double smallest_singular_value_;
};

/// The co-metric is not positive definite where it is queried.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// The lowered drift one-form is not closed: the generator has no invariant density.
class NonSymmetricError : public Error {
 public:
  NonSymmetricError(const std::string& what, double closedness_residual)
      : Error(what), closedness_residual_(closedness_residual) {}
  double closedness_residual() const noexcept { return closedness_residual_; }

 private:
  double closedness_residual_;
};

/// The requested computation is outside what the implementation supports.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (factorization, time step too small, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gammaforge
