#include "surropt/forecast_objective.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "surropt/errors.hpp"

namespace surropt {

namespace {

int index_of_dimension(const IntegerDomain& domain, const std::string& name) {
  for (int i = 0; i < domain.dimension(); ++i) {
    if (domain.dims()[i].name == name) return i;
  }
  return -1;
}

int as_count(double raw, const char* what) {
  const double rounded = std::round(raw);
  if (std::fabs(rounded - raw) > 1e-9 || rounded < 1.0) {
    throw InvalidArgument(std::string(what) + " must be a positive integer, got " +
                          std::to_string(raw));
  }
  return static_cast<int>(rounded);
}

}  // namespace

void HpoProblemSpec::validate() const {
  if (!series) throw ConfigError("objective.series: no series loaded");
  if (train_count < 1) {
    throw ConfigError("objective.train_samples: must be positive");
  }
  std::set<std::string> names;
  for (const DimensionSpec& dim : domain.dims()) names.insert(dim.name);
  for (const char* required : kDimensionNames) {
    if (!names.count(required)) {
      throw ConfigError(std::string("domain: missing dimension '") + required +
                        "' (epochs, dropout, batch, layers, lag and nodes must "
                        "all be present; use a single-value list to pin one)");
    }
  }
  if (static_cast<int>(names.size()) != domain.dimension() ||
      domain.dimension() != 6) {
    throw ConfigError("domain: timeseries objective takes exactly the six MLP "
                      "dimensions with unique names");
  }
  const int lag_index = index_of_dimension(domain, "lag");
  const double max_lag = domain.dims()[lag_index].values.back();
  if (series->days() < static_cast<int>(max_lag) + train_count + 2) {
    throw ConfigError("objective: series is too short for the largest lag and "
                      "the configured training-sample count");
  }
}

DecodedPoint decode_point(const HpoProblemSpec& spec,
                          std::span<const double> raw, std::uint64_t seed) {
  const IntegerDomain& domain = spec.domain;
  if (static_cast<int>(raw.size()) != domain.dimension()) {
    throw InvalidArgument("hyperparameter vector has the wrong dimension");
  }
  const auto value_of = [&](const char* name) {
    const int index = index_of_dimension(domain, name);
    if (index < 0) throw InvalidArgument(std::string("missing dimension ") + name);
    return raw[index];
  };

  DecodedPoint decoded;
  decoded.lag = as_count(value_of("lag"), "lag");
  decoded.architecture.input_width =
      (decoded.lag + 1) * spec.series->variable_count();
  decoded.architecture.hidden_layers = as_count(value_of("layers"), "layers");
  decoded.architecture.nodes_per_layer = as_count(value_of("nodes"), "nodes");
  decoded.architecture.output_width = spec.series->well_count();
  decoded.architecture.dropout_rate = value_of("dropout");
  decoded.training.epochs = as_count(value_of("epochs"), "epochs");
  decoded.training.batch_size = as_count(value_of("batch"), "batch");
  decoded.training.learning_rate = 0.001;
  decoded.training.decay = 0.0;
  decoded.training.seed = seed;
  return decoded;
}

ForecastObjective::ForecastObjective(std::shared_ptr<const HpoProblemSpec> spec)
    : spec_(std::move(spec)) {
  spec_->validate();
  scaling_ = fit_scaling(*spec_->series);
}

std::shared_ptr<const LagSampleSet> ForecastObjective::samples_for(int lag) const {
  {
    std::lock_guard lock(cache_mutex_);
    const auto it = cache_.find(lag);
    if (it != cache_.end()) return it->second;
  }
  auto built = std::make_shared<const LagSampleSet>(
      build_lag_samples(*spec_->series, scaling_, lag, spec_->train_count));
  std::lock_guard lock(cache_mutex_);
  return cache_.try_emplace(lag, std::move(built)).first->second;
}

double ForecastObjective::evaluate(std::span<const double> raw,
                                   std::uint64_t seed) const {
  const DecodedPoint decoded = decode_point(*spec_, raw, seed);
  const std::shared_ptr<const LagSampleSet> samples = samples_for(decoded.lag);
  Mlp model = Mlp::build(decoded.architecture, mix_seed(seed, 0x11));
  model = train(std::move(model), *samples, decoded.training);
  return evaluate_loss(model, *samples, LagSampleSet::Split::test);
}

std::string ForecastObjective::descriptor() const {
  return "mlp-forecast[" + std::to_string(spec_->series->well_count()) +
         " well(s), " + std::to_string(spec_->series->days()) + " days, T=" +
         std::to_string(spec_->train_count) + "]";
}

double ForecastObjective::persistence_baseline(int lag) const {
  return persistence_mse(*spec_->series, scaling_, *samples_for(lag),
                         LagSampleSet::Split::test);
}

std::unique_ptr<ForecastObjective> make_objective(
    std::shared_ptr<const HpoProblemSpec> spec) {
  return std::make_unique<ForecastObjective>(std::move(spec));
}

OutOfSampleResult out_of_sample_run(const HpoProblemSpec& spec,
                                    std::span<const double> raw_theta,
                                    int horizon, std::uint64_t seed) {
  spec.validate();
  if (horizon < 0) throw InvalidArgument("horizon must be nonnegative");
  const DailySeries& series = *spec.series;

  OutOfSampleResult result;
  if (horizon == 0) {
    result.forecast_levels.resize(0, series.well_count());
    result.truth_levels.resize(0, series.well_count());
    return result;
  }

  const DecodedPoint decoded = decode_point(spec, raw_theta, seed);
  const int start_day = series.days() - horizon;
  if (start_day <= decoded.lag + 2) {
    throw InvalidArgument("horizon leaves too little data for retraining");
  }

  // retrain on every sample the pre-horizon data provides; the scaling is
  // fitted without looking at the held-back days
  const DailySeries history = series.head(start_day);
  const ScalingSpec scaling = fit_scaling(history);
  const int all_samples = history.days() - decoded.lag;
  const int buildable = std::min(all_samples, series.days() - decoded.lag - 2);
  const LagSampleSet built =
      build_lag_samples(series, scaling, decoded.lag, std::max(1, buildable));
  std::vector<int> anchors(built.sample_count());
  for (int i = 0; i < built.sample_count(); ++i) anchors[i] = built.anchor_day(i);
  const LagSampleSet train_samples(decoded.lag, all_samples,
                                   Eigen::MatrixXd(built.inputs()),
                                   Eigen::MatrixXd(built.targets()),
                                   std::move(anchors));

  Mlp model = Mlp::build(decoded.architecture, mix_seed(seed, 0x11));
  model = train(std::move(model), train_samples, decoded.training);

  result.forecast_levels =
      dynamic_forecast(model, series, scaling, start_day, horizon);
  result.truth_levels.resize(horizon, series.well_count());
  for (int k = 0; k < horizon; ++k) {
    for (int w = 0; w < series.well_count(); ++w) {
      result.truth_levels(k, w) = series.groundwater(start_day + k, w);
    }
  }

  double acc = 0.0;
  double persistence_acc = 0.0;
  result.rmse_level_units.resize(series.well_count());
  for (int w = 0; w < series.well_count(); ++w) {
    const double last_observed =
        scaling.scale_groundwater(w, series.groundwater(start_day - 1, w));
    double well_acc = 0.0;
    for (int k = 0; k < horizon; ++k) {
      const double predicted =
          scaling.scale_groundwater(w, result.forecast_levels(k, w));
      const double truth =
          scaling.scale_groundwater(w, result.truth_levels(k, w));
      well_acc += (predicted - truth) * (predicted - truth);
      persistence_acc += (last_observed - truth) * (last_observed - truth);
    }
    well_acc /= horizon;
    acc += well_acc;
    result.rmse_level_units[w] = scaling.rmse_level_units(w, well_acc);
  }
  result.normalized_mse = acc / series.well_count();
  result.persistence_normalized_mse =
      persistence_acc / (static_cast<double>(horizon) * series.well_count());
  return result;
}

}  // namespace surropt
