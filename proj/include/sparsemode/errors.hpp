#pragma once

#include <stdexcept>
#include <string>

namespace sparsemode {

// Invalid or inconsistent input: shape mismatches, broken invariants, bad files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: exponential overflow, failed factorizations, solver stagnation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The damped least-squares loop rejected too many consecutive steps.
// Carries the objective value at the point where progress stopped.
class StagnationError : public NumericalError {
 public:
  StagnationError(const std::string& what, double last_objective)
      : NumericalError(what), last_objective_(last_objective) {}

  double last_objective() const noexcept { return last_objective_; }

 private:
  double last_objective_;
};

}  // namespace sparsemode
