#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "surropt/black_box.hpp"
#include "surropt/domain.hpp"
#include "surropt/mlp.hpp"
#include "surropt/timeseries.hpp"

namespace surropt {

// The desk-scale bilevel problem: hyperparameters pick an MLP architecture and
// training run over lag samples of a daily series; the upper-level loss is the
// trained model's test-split MSE.
struct HpoProblemSpec {
  std::shared_ptr<const DailySeries> series;
  int train_count = 0;       // lag-independent training-sample count
  IntegerDomain domain;      // exactly the six dimensions below

  // dimension names, each mapping to one architecture/training field
  static constexpr const char* kDimensionNames[6] = {
      "epochs", "dropout", "batch", "layers", "lag", "nodes"};

  void validate() const;  // throws ConfigError / InvalidArgument
};

// Architecture and training configuration decoded from one raw point.
struct DecodedPoint {
  MlpArchitecture architecture;
  TrainConfig training;
  int lag = 0;
};

DecodedPoint decode_point(const HpoProblemSpec& spec,
                          std::span<const double> raw, std::uint64_t seed);

class ForecastObjective final : public ExpensiveObjective {
 public:
  explicit ForecastObjective(std::shared_ptr<const HpoProblemSpec> spec);

  // Trains an MLP from the raw hyperparameters with the given seed and
  // returns its test-split MSE in normalized units. Pure per (raw, seed).
  double evaluate(std::span<const double> raw, std::uint64_t seed) const override;

  std::string descriptor() const override;

  // One-step persistence MSE on the test split at the given lag.
  double persistence_baseline(int lag) const;

  const ScalingSpec& scaling() const { return scaling_; }
  const HpoProblemSpec& spec() const { return *spec_; }

 private:
  std::shared_ptr<const LagSampleSet> samples_for(int lag) const;

  std::shared_ptr<const HpoProblemSpec> spec_;
  ScalingSpec scaling_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<int, std::shared_ptr<const LagSampleSet>> cache_;
};

std::unique_ptr<ForecastObjective> make_objective(
    std::shared_ptr<const HpoProblemSpec> spec);

struct OutOfSampleResult {
  Eigen::MatrixXd forecast_levels;  // horizon x wells
  Eigen::MatrixXd truth_levels;
  std::optional<double> normalized_mse;  // absent for an empty horizon
  std::vector<double> rmse_level_units;  // per well
  std::optional<double> persistence_normalized_mse;  // flat carry baseline
};

// Retrains on every sample the pre-horizon part of the series provides, then
// forecasts the held-back final `horizon` days dynamically.
OutOfSampleResult out_of_sample_run(const HpoProblemSpec& spec,
                                    std::span<const double> raw_theta,
                                    int horizon, std::uint64_t seed);

}  // namespace surropt
