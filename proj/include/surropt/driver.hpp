#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surropt/acquisition.hpp"
#include "surropt/black_box.hpp"
#include "surropt/domain.hpp"

namespace surropt {

enum class Strategy { rbf, gp, random };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

// One evaluated hyperparameter point: the replicate losses, their mean (the
// running estimate of the expected loss), and the measured evaluation time.
struct EvaluationRecord {
  LatticePoint point;
  std::vector<double> raw;
  std::vector<std::uint64_t> replicate_seeds;
  std::vector<double> replicate_losses;
  double mean_loss = 0.0;
  double wall_time_seconds = 0.0;
};

struct OptimizationTrace {
  Strategy strategy = Strategy::random;
  int n0 = 0;
  int replicates = 0;
  int budget = 0;
  std::vector<EvaluationRecord> records;
  std::vector<double> best_so_far;  // running minimum of mean_loss

  // Index of the earliest record attaining the minimal mean loss.
  std::size_t incumbent_index() const;
};

// Knobs of the adaptive-sampling machinery; the defaults are the documented
// algorithm parameters (M = 500 candidates per set, 100x100 GA).
struct AlgorithmParams {
  int candidate_m = 500;
  GaConfig ga;
};

// The full optimization loop: n0-point random initial design with replicated
// evaluations, then surrogate refit + acquisition until `budget` points have
// been evaluated. No point is evaluated twice; the random strategy skips the
// surrogate entirely.
OptimizationTrace run_hpo(const ExpensiveObjective& objective,
                          const IntegerDomain& domain, Strategy strategy,
                          int budget, int n0, int replicates, Rng& rng,
                          const AlgorithmParams& params = {});

// Elementwise mean and population standard deviation across equal-length
// series (one row per trial).
struct SeriesSummary {
  std::vector<double> mean;
  std::vector<double> stddev;
};

SeriesSummary summarize_series(const std::vector<std::vector<double>>& series);

// Per-evaluation mean/std of the best-so-far curves of several trials.
SeriesSummary summarize_trials(const std::vector<OptimizationTrace>& traces);

}  // namespace surropt
