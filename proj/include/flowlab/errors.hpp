#pragma once

#include <stdexcept>
#include <string>

namespace flowlab {

/// Invalid arguments or violated preconditions (bad index, malformed expression, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input lies outside the mathematical domain of the operation (F <= 0, non-convex profile, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Floating-point failure: non-finite values, eigensolver or bracketing failure.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flowlab
