#pragma once

#include <stdexcept>
#include <string>

namespace bvol {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: out-of-range sizes, malformed matrices, invalid configs.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Matrix too close to singular for a stable factorization.
class ConditioningError : public InvalidArgument {
 public:
  ConditioningError(const std::string& what, double condition_number)
      : InvalidArgument(what), condition_number_(condition_number) {}
  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

/// A quadrature estimate that cannot be used (e.g. a non-PD Gram from noise).
class EstimationFailure : public Error {
 public:
  using Error::Error;
};

/// Exact coefficient arithmetic left its configured range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Two independent computations of the same quantity disagreed.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace bvol
