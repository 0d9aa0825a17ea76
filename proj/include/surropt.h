/* surropt — surrogate-model hyperparameter optimization over integer lattices.
 *
 * C interface of the shared library. All functions return a status code;
 * surropt_last_error() describes the most recent failure on the calling
 * thread. Handles are opaque and must be released with their _close function.
 */
#ifndef SURROPT_H
#define SURROPT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum surropt_status {
  SURROPT_OK = 0,
  SURROPT_ERR_INVALID_ARGUMENT = 1,
  SURROPT_ERR_IO = 2,
  SURROPT_ERR_CONFIG = 3,
  SURROPT_ERR_DATA = 4,
  SURROPT_ERR_NUMERIC = 5,
  SURROPT_ERR_EXHAUSTED = 6,
  SURROPT_ERR_INTERNAL = 7
} surropt_status;

/* An experiment: configuration plus overrides, ready to validate or run. */
typedef struct surropt_experiment surropt_experiment;

const char* surropt_version(void);

/* Message for the last failing call on this thread; never NULL. */
const char* surropt_last_error(void);

/* Loads a JSON experiment configuration from disk. On success *out owns the
 * experiment; on failure *out is NULL. */
surropt_status surropt_experiment_open(const char* config_path,
                                       surropt_experiment** out);

surropt_status surropt_experiment_set_seed(surropt_experiment* experiment,
                                           uint64_t master_seed);
surropt_status surropt_experiment_set_output_dir(surropt_experiment* experiment,
                                                 const char* output_dir);
surropt_status surropt_experiment_set_trials(surropt_experiment* experiment,
                                             int trials);
surropt_status surropt_experiment_set_budget(surropt_experiment* experiment,
                                             int budget);

/* Re-validates the configuration including the applied overrides. */
surropt_status surropt_experiment_validate(const surropt_experiment* experiment);

/* Runs every strategy and trial, writing traces, timing sidecars, summaries
 * and the best-hyperparameters table into the configured output directory. */
surropt_status surropt_experiment_run(const surropt_experiment* experiment);

void surropt_experiment_close(surropt_experiment* experiment);

/* Aggregates the trace files of a finished run into plot-ready
 * convergence.csv, time.csv and hyperparameters.csv. */
surropt_status surropt_emit_plot_data(const char* traces_dir,
                                      const char* out_dir);

/* Generates a synthetic daily hydrograph CSV from a JSON generator spec
 * ("{}" or a path-less literal selects the defaults). */
surropt_status surropt_generate_series(const char* generator_spec_json,
                                       const char* out_csv_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SURROPT_H */
