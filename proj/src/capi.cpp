#include "surropt.h"

#include <exception>
#include <memory>
#include <string>

#include <json.hpp>

#include "surropt/config.hpp"
#include "surropt/errors.hpp"
#include "surropt/experiment.hpp"
#include "surropt/synthetic_series.hpp"

namespace {

thread_local std::string g_last_error = "no error";

surropt_status record_error(const std::exception& e, surropt_status status) {
  g_last_error = e.what();
  return status;
}

template <typename Fn>
surropt_status guarded(Fn&& fn) {
  try {
    fn();
    return SURROPT_OK;
  } catch (const surropt::InvalidArgument& e) {
    return record_error(e, SURROPT_ERR_INVALID_ARGUMENT);
  } catch (const surropt::ConfigError& e) {
    return record_error(e, SURROPT_ERR_CONFIG);
  } catch (const surropt::DataError& e) {
    return record_error(e, SURROPT_ERR_DATA);
  } catch (const surropt::NumericError& e) {
    return record_error(e, SURROPT_ERR_NUMERIC);
  } catch (const surropt::SearchExhausted& e) {
    return record_error(e, SURROPT_ERR_EXHAUSTED);
  } catch (const surropt::IoError& e) {
    return record_error(e, SURROPT_ERR_IO);
  } catch (const std::exception& e) {
    return record_error(e, SURROPT_ERR_INTERNAL);
  }
}

}  // namespace

struct surropt_experiment {
  surropt::ExperimentConfig config;
};

extern "C" {

const char* surropt_version(void) { return "1.0.0"; }

const char* surropt_last_error(void) { return g_last_error.c_str(); }

surropt_status surropt_experiment_open(const char* config_path,
                                       surropt_experiment** out) {
  if (out == nullptr) {
    g_last_error = "output handle pointer is NULL";
    return SURROPT_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  if (config_path == nullptr) {
    g_last_error = "config path is NULL";
    return SURROPT_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto handle = std::make_unique<surropt_experiment>();
    handle->config = surropt::ExperimentConfig::load(config_path);
    *out = handle.release();
  });
}

surropt_status surropt_experiment_set_seed(surropt_experiment* experiment,
                                           uint64_t master_seed) {
  if (experiment == nullptr) {
    g_last_error = "experiment handle is NULL";
    return SURROPT_ERR_INVALID_ARGUMENT;
  }
  experiment->config.master_seed = master_seed;
  return SURROPT_OK;
}

surropt_status surropt_experiment_set_output_dir(surropt_experiment* experiment,
                                                 const char* output_dir) {
  if (experiment == nullptr || output_dir == nullptr) {
    g_last_error = "experiment handle or directory is NULL";
    return SURROPT_ERR_INVALID_ARGUMENT;
  }
  experiment->config.output_dir = output_dir;
  return SURROPT_OK;
}

surropt_status surropt_experiment_set_trials(surropt_experiment* experiment,
                                             int trials) {
  if (experiment == nullptr) {
    g_last_error = "experiment handle is NULL";
    return SURROPT_ERR_INVALID_ARGUMENT;
  }
  experiment->config.trials = trials;
  return SURROPT_OK;
}

surropt_status surropt_experiment_set_budget(surropt_experiment* experiment,
                                             int budget) {
  if (experiment == nullptr) {
    g_last_error = "experiment handle is NULL";
    return SURROPT_ERR_INVALID_ARGUMENT;
  }
  experiment->config.budget = budget;
  return SURROPT_OK;
}

surropt_status surropt_experiment_validate(
    const surropt_experiment* experiment) {
  if (experiment == nullptr) {
    g_last_error = "experiment handle is NULL";
    return SURROPT_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { experiment->config.validate(); });
}

surropt_status surropt_experiment_run(const surropt_experiment* experiment) {
  if (experiment == nullptr) {
    g_last_error = "experiment handle is NULL";
    return SURROPT_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { surropt::run_experiment(experiment->config); });
}

void surropt_experiment_close(surropt_experiment* experiment) {
  delete experiment;
}

surropt_status surropt_emit_plot_data(const char* traces_dir,
                                      const char* out_dir) {
  if (traces_dir == nullptr || out_dir == nullptr) {
    g_last_error = "directory argument is NULL";
    return SURROPT_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { surropt::emit_plot_data(traces_dir, out_dir); });
}

surropt_status surropt_generate_series(const char* generator_spec_json,
                                       const char* out_csv_path) {
  if (generator_spec_json == nullptr || out_csv_path == nullptr) {
    g_last_error = "argument is NULL";
    return SURROPT_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(generator_spec_json);
    } catch (const nlohmann::json::exception& e) {
      throw surropt::ConfigError(std::string("generator spec: ") + e.what());
    }
    const surropt::SyntheticSeriesSpec spec =
        surropt::synthetic_series_spec_from_json(j);
    surropt::generate_series(spec).save(out_csv_path);
  });
}

}  // extern "C"
