#pragma once

#include <string>
#include <vector>

#include "surropt/config.hpp"
#include "surropt/driver.hpp"

namespace surropt {

// Documented seed-splitting rule for trials.
inline std::uint64_t trial_seed(std::uint64_t master, int strategy_index,
                                int trial_index) {
  return mix_seed(master, static_cast<std::uint64_t>(strategy_index),
                  static_cast<std::uint64_t>(trial_index));
}

// Runs every strategy x trial of the experiment and writes, under
// config.output_dir:
//   config.json                      canonicalized configuration snapshot
//   trace_<strategy>_t<k>.jsonl      one metadata line + one line per evaluation
//   trace_<strategy>_t<k>.time.csv   measured per-evaluation seconds (sidecar)
//   summary_<strategy>.csv           mean/std best-so-far and cumulative time
//   best_hyperparameters.csv         per strategy and trial: raw optimum + loss
// Trace .jsonl files are a pure function of the master seed.
void run_experiment(const ExperimentConfig& config);

// Reads the trace files of a finished experiment and writes plot-ready
// convergence.csv, time.csv and hyperparameters.csv into out_dir.
void emit_plot_data(const std::string& traces_dir, const std::string& out_dir);

// Trace (de)serialization used by run_experiment/emit_plot_data.
struct StoredTrace {
  std::string strategy;
  int trial = 0;
  int budget = 0;
  int n0 = 0;
  int replicates = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> dimension_names;
  OptimizationTrace trace;
};

std::string trace_to_jsonl(const StoredTrace& stored);
StoredTrace trace_from_jsonl(const std::string& path);

}  // namespace surropt
