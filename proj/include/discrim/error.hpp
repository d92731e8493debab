#pragma once

#include <stdexcept>
#include <string>

namespace discrim {

// Malformed input or a violated precondition the caller controls.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration or search would exceed its configured cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A checked mathematical property failed (e.g. a certified threshold was
// contradicted by an explicit counterexample).
class PropertyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace discrim
