#pragma once

#include <stdexcept>
#include <string>

namespace semiflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// LU pivot underflowed the singularity threshold.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Dense eigenvalue/SVD routine failed to converge.
class EigenFailureError : public Error {
 public:
  using Error::Error;
};

/// An operator application required the inverse of a singular matrix.
/// Reported, never repaired: a singular pivot block is informative.
class BreakdownError : public Error {
 public:
  using Error::Error;
};

/// A solution candidate became numerically singular inside a residual check.
class SingularIterateError : public Error {
 public:
  using Error::Error;
};

/// Too few samples for the convergence-order estimator.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Residual sequence handed to the order estimator is not strictly decreasing.
class NotDecreasingError : public Error {
 public:
  using Error::Error;
};

/// Singular-value gap test failed when splitting off a null space.
class RankAmbiguityError : public Error {
 public:
  using Error::Error;
};

/// A documented solver precondition is violated (bad config, unstable data).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Coefficient recursion degenerates (a_k = 1 has no contraction to track).
class DegenerateCoefficientError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Malformed problem file; message names the offending field.
class ProblemFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace semiflow
