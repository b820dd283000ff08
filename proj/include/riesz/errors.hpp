#pragma once

#include <stdexcept>
#include <string>

namespace riesz {

// Precondition or invariant violation in caller-supplied data.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation produced a non-finite value or could not be carried out numerically.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace riesz
