// Batch front end for the surropt shared library. Intentionally built against
// the C API only.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "surropt.h"

namespace {

int fail(const char* verb, surropt_status status) {
  std::fprintf(stderr, "surropt %s: %s (status %d)\n", verb,
               surropt_last_error(), static_cast<int>(status));
  return 1;
}

struct ExperimentHandle {
  surropt_experiment* ptr = nullptr;
  ~ExperimentHandle() { surropt_experiment_close(ptr); }
};

int open_with_overrides(const std::string& config_path, bool has_seed,
                        std::uint64_t seed, const std::string& out_dir,
                        int trials, int budget, ExperimentHandle& handle) {
  surropt_status status = surropt_experiment_open(config_path.c_str(), &handle.ptr);
  if (status != SURROPT_OK) return fail("open", status);
  if (has_seed) {
    status = surropt_experiment_set_seed(handle.ptr, seed);
    if (status != SURROPT_OK) return fail("override", status);
  }
  if (!out_dir.empty()) {
    status = surropt_experiment_set_output_dir(handle.ptr, out_dir.c_str());
    if (status != SURROPT_OK) return fail("override", status);
  }
  if (trials > 0) {
    status = surropt_experiment_set_trials(handle.ptr, trials);
    if (status != SURROPT_OK) return fail("override", status);
  }
  if (budget > 0) {
    status = surropt_experiment_set_budget(handle.ptr, budget);
    if (status != SURROPT_OK) return fail("override", status);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surrogate-model hyperparameter optimization over integer lattices"};
  app.set_version_flag("--version", std::string(surropt_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir, traces_dir, spec_path, out_csv;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int trials = 0, budget = 0;

  CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("--seed", seed, "override the master seed")
      ->each([&](const std::string&) { has_seed = true; });
  run->add_option("--out", out_dir, "override the output directory");
  run->add_option("--trials", trials, "override the trial count");
  run->add_option("--budget", budget, "override the evaluation budget");

  CLI::App* validate =
      app.add_subcommand("validate", "check a config file and exit");
  validate->add_option("config", config_path, "experiment config (JSON)")
      ->required();

  CLI::App* emit = app.add_subcommand(
      "emit-plots", "aggregate traces into plot-ready CSV files");
  emit->add_option("traces", traces_dir, "directory holding trace_*.jsonl")
      ->required();
  emit->add_option("--out", out_dir, "output directory (default: traces dir)");

  CLI::App* gen = app.add_subcommand(
      "gen-data", "generate a synthetic daily hydrograph CSV");
  gen->add_option("spec", spec_path,
                  "generator spec (JSON file); omit for defaults");
  gen->add_option("--out", out_csv, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    ExperimentHandle handle;
    const int rc = open_with_overrides(config_path, has_seed, seed, out_dir,
                                       trials, budget, handle);
    if (rc != 0) return rc;
    const surropt_status status = surropt_experiment_run(handle.ptr);
    if (status != SURROPT_OK) return fail("run", status);
    std::printf("experiment finished\n");
    return 0;
  }

  if (validate->parsed()) {
    ExperimentHandle handle;
    surropt_status status = surropt_experiment_open(config_path.c_str(), &handle.ptr);
    if (status != SURROPT_OK) return fail("validate", status);
    status = surropt_experiment_validate(handle.ptr);
    if (status != SURROPT_OK) return fail("validate", status);
    std::printf("config ok\n");
    return 0;
  }

  if (emit->parsed()) {
    const std::string target = out_dir.empty() ? traces_dir : out_dir;
    const surropt_status status =
        surropt_emit_plot_data(traces_dir.c_str(), target.c_str());
    if (status != SURROPT_OK) return fail("emit-plots", status);
    std::printf("wrote convergence.csv, time.csv, hyperparameters.csv to %s\n",
                target.c_str());
    return 0;
  }

  // gen-data
  std::string spec_json = "{}";
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) {
      std::fprintf(stderr, "surropt gen-data: cannot open '%s'\n",
                   spec_path.c_str());
      return 1;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    spec_json = buffer.str();
  }
  const surropt_status status =
      surropt_generate_series(spec_json.c_str(), out_csv.c_str());
  if (status != SURROPT_OK) return fail("gen-data", status);
  std::printf("wrote %s\n", out_csv.c_str());
  return 0;
}
