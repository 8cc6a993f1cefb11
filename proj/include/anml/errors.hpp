#pragma once

#include <stdexcept>
#include <string>

namespace anml {

// Argument outside the mathematical domain of a function (x <= 0 for lnΓ, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed call: size mismatch, empty input, symbol out of alphabet.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The model is well formed but the requested predictor does not exist
// (divergent tilted prior, Luckiness NML with an unbounded supremum).
class InfeasibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Valid request outside what an algorithm supports (e.g. grid search for m > 3).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative numerics did not reach the requested tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double partial_estimate, double error_estimate)
      : std::runtime_error(what), partial_(partial_estimate), error_(error_estimate) {}

  double partial_estimate() const noexcept { return partial_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double partial_;
  double error_;
};

// Broken internal invariant (cache mismatch, missing normalizer).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace anml
