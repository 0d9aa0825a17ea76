#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "surropt/domain.hpp"
#include "surropt/driver.hpp"
#include "surropt/synthetic_series.hpp"

namespace surropt {

// Testbed objective selection.
struct SyntheticObjectiveSpec {
  std::string kind;  // quadratic | multimodal | noisy_quadratic
  std::optional<std::vector<std::int32_t>> target;  // quadratic family
  double sigma = 0.1;                               // noisy_quadratic
  std::uint64_t seed = 1;                           // multimodal
};

// Time-series MLP objective: a CSV on disk or a generator spec, plus the
// fixed training-sample count.
struct TimeseriesObjectiveSpec {
  std::optional<std::string> series_path;
  std::optional<SyntheticSeriesSpec> generator;
  int train_count = 0;
};

using ObjectiveSpec = std::variant<SyntheticObjectiveSpec, TimeseriesObjectiveSpec>;

struct ExperimentConfig {
  ObjectiveSpec objective;
  std::vector<DimensionSpec> domain_dims;
  std::vector<Strategy> strategies;
  int trials = 5;
  int budget = 50;
  std::optional<int> n0;  // default d+1
  int replicates = 5;
  std::uint64_t master_seed = 0;
  std::string output_dir = "out";

  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig parse(const nlohmann::json& j);

  // Throws ConfigError naming the offending field.
  void validate() const;

  nlohmann::json to_json() const;

  int effective_n0() const {
    return n0 ? *n0 : static_cast<int>(domain_dims.size()) + 1;
  }
};

nlohmann::json synthetic_series_spec_to_json(const SyntheticSeriesSpec& spec);
SyntheticSeriesSpec synthetic_series_spec_from_json(const nlohmann::json& j);

}  // namespace surropt
