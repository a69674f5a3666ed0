#pragma once

#include <stdexcept>
#include <string>

namespace nevai {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the quantity is defined
/// (e.g. |x0| <= 1 for the hyperbolic root, a_n <= 0, q = 0 in a cosine sum).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The two evaluation points of the Christoffel-Darboux formula are so
/// close that the quotient is dominated by cancellation.
class DegenerateInputError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A linear solve lost too many digits to be trusted.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to reach its residual target.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace nevai
