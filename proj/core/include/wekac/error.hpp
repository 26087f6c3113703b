#pragma once

#include <stdexcept>
#include <string>

namespace wekac {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A weight/additive specification is malformed (negative weight, divergent
/// local series, unknown catalog entry).
class SpecificationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The variance proxy B(x) vanishes, so normalization is impossible.
class DegenerateVarianceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Least-squares fit could not be performed.
class FitError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A configured size limit or an integer representation was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A floating-point accumulation became non-finite.
class OverflowError : public CapacityError {
 public:
  using CapacityError::CapacityError;
};

}  // namespace wekac
