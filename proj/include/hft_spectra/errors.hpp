#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hft_spectra {

/// Argument outside the mathematical domain of an operation (negative z, r <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Request that violates an operation's preconditions (count = 0, bad ladder, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InconsistentLadderError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class StepTooLargeError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A matrix entry or intermediate quantity became non-finite.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Bisection failed to isolate an eigenvalue, or two computed eigenvalues coincide.
/// `index` is the zero-based position of the first offending eigenvalue.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}

  [[nodiscard]] std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace hft_spectra
