#pragma once

#include <cstdint>
#include <vector>

#include "surropt/domain.hpp"
#include "surropt/gp_surrogate.hpp"
#include "surropt/rbf_surrogate.hpp"

namespace surropt {

enum class CandidateOrigin { perturbation, global };

// Candidate pool for the RBF weighted-score step; points already evaluated
// have been removed, internal duplicates are kept.
struct CandidateSet {
  std::vector<LatticePoint> points;
  std::vector<CandidateOrigin> origins;
};

// The repeating exploration weight sequence 0, 0.25, 0.5, 0.75, 1, 0, ...
class WeightCycle {
 public:
  double next() {
    const double w = kWeights[cursor_];
    cursor_ = (cursor_ + 1) % 5;
    return w;
  }

 private:
  static constexpr double kWeights[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
  int cursor_ = 0;
};

struct GaConfig {
  int generations = 100;
  int population = 100;
  double crossover_prob = 0.75;
  // Per-gene resampling probability; non-positive means the 1/d default.
  double mutation_prob = 0.0;
  int tournament = 3;
};

struct GaResult {
  LatticePoint point;
  double expected_improvement = 0.0;
  std::uint64_t fitness_evaluations = 0;
};

// m perturbation candidates (every coordinate of `best` shifted by +-1 or +-2,
// reflected into bounds) plus m uniform global candidates, with evaluated
// points removed. Throws SearchExhausted when nothing remains.
CandidateSet generate_candidates(const IntegerDomain& domain,
                                 const LatticePoint& best,
                                 const PointSet& evaluated, int m, Rng& rng);

// Supplement-style weighted score: V = omega * V_distance + (1-omega) * V_rbf,
// both min-max normalized over the candidate pool; returns the candidate with
// the lowest V, ties broken by candidate order.
LatticePoint weighted_score_select(const CandidateSet& candidates,
                                   const RbfModel& rbf,
                                   const std::vector<LatticePoint>& evaluated_points,
                                   double omega);

// Generational GA over lattice coordinate vectors maximizing expected
// improvement: tournament selection, uniform crossover, per-gene uniform
// resampling mutation, elitism of one.
GaResult ga_maximize_ei(const IntegerDomain& domain, const GpModel& gp,
                        double ell_best, const GaConfig& config, Rng& rng);

// Uniform draw over the unevaluated complement of the lattice.
LatticePoint random_propose(const IntegerDomain& domain,
                            const PointSet& evaluated, Rng& rng);

}  // namespace surropt
