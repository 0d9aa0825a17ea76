#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace surropt {

// An expensive stochastic objective: hyperparameters in raw units plus a
// replicate seed in, scalar loss out. Implementations must be replicable —
// the same (raw, seed) pair always yields the same loss — and may throw to
// signal an evaluation failure (the driver retries once).
class ExpensiveObjective {
 public:
  virtual ~ExpensiveObjective() = default;

  virtual double evaluate(std::span<const double> raw, std::uint64_t seed) const = 0;

  virtual std::string descriptor() const = 0;
};

}  // namespace surropt
