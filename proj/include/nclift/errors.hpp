#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nclift {

/// Enumeration limit (vertex cap or measurement cap) exceeded.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outcome lifting rejected: the source inequality post-selects on the chosen
/// outcome, so clubbing the new outcome with it would split the lift into two
/// independent post-selected facets instead of a single one.
class ExclusionRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The symmetrized coefficients admit no single-valued effective table.
class ReconciliationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation requires a no-disturbance correlation but the argument disturbs.
class DisturbanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A step of a sequential lift failed; carries the zero-based step position.
class LiftStepError : public std::runtime_error {
 public:
  LiftStepError(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// File loading / JSON parsing failure with location information.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nclift
