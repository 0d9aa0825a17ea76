#pragma once

#include <memory>

#include "surropt/black_box.hpp"
#include "surropt/domain.hpp"

namespace surropt {

// Synthetic lattice objectives with known optima; stand-ins for the expensive
// model-fitting loss when validating surrogates, acquisition, and the driver.
class SyntheticObjective : public ExpensiveObjective {
 public:
  // The raw-coordinate optimum and its (noiseless) value.
  virtual const LatticePoint& optimum() const = 0;
  virtual double optimum_value() const = 0;
};

// f(x) = sum_i (x_i - target_i)^2 in raw units; minimum 0 at `target`.
std::unique_ptr<SyntheticObjective> quadratic(const IntegerDomain& domain,
                                              const LatticePoint& target);

// Sum of three seeded negative Gaussian bumps; rugged, with the global optimum
// located by full enumeration at construction. The lattice must be small
// enough to enumerate (at most 10^6 points).
std::unique_ptr<SyntheticObjective> multimodal(const IntegerDomain& domain,
                                               std::uint64_t seed);

// Adds seeded Gaussian noise to a base objective; the noise is a pure function
// of (point, seed) so evaluations stay replicable.
std::unique_ptr<SyntheticObjective> with_noise(
    std::unique_ptr<SyntheticObjective> base, double sigma);

}  // namespace surropt
