#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace idla {

// A walk exceeded its step budget. Budgets are sized so that this signals a
// bug (or an absurd configuration), not bad luck; the partial state is kept
// for diagnostics.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t steps)
      : std::runtime_error(what + " (steps=" + std::to_string(steps) + ")"),
        steps_(steps) {}
  std::uint64_t steps() const { return steps_; }

 private:
  std::uint64_t steps_;
};

// A Monte Carlo estimate came out degenerate (all zeros or all ones), so the
// requested quantity cannot be resolved at this sample size / grid.
class ResolutionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace idla
