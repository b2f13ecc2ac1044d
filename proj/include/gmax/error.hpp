#pragma once

#include <stdexcept>
#include <string>

namespace gmax {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A structural parameter (grid size, nesting, path count) is unusable.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Matrix or vector dimensions do not agree, or input is empty.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A closed-form bound was requested outside its range of validity.
class ValidityError : public Error {
 public:
  using Error::Error;
};

/// Circulant embedding produced a significantly negative eigenvalue.
class EmbeddingError : public Error {
 public:
  using Error::Error;
};

/// Covariance matrix is not positive semidefinite within tolerance.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

/// Net construction violated the cardinality constraint |T_k| <= 2^(2^k).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Numerical results contradict an identity that must hold (e.g. a negative
/// variance well beyond roundoff).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace gmax
