#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "surropt/timeseries.hpp"

namespace surropt {

struct MlpArchitecture {
  int input_width = 0;
  int hidden_layers = 1;
  int nodes_per_layer = 1;  // identical across hidden layers
  int output_width = 1;
  double dropout_rate = 0.0;  // hidden activations only, [0, 1)
};

struct TrainConfig {
  int epochs = 100;
  int batch_size = 32;
  double learning_rate = 0.001;
  double decay = 0.0;
  std::uint64_t seed = 0;
};

// ADAM with bias-corrected moments (beta1 = 0.9, beta2 = 0.999, eps = 1e-8)
// over a flat parameter vector. `decay` applies the 1/(1 + decay * t)
// learning-rate schedule; zero keeps the rate constant.
class AdamOptimizer {
 public:
  AdamOptimizer(Eigen::Index size, double learning_rate, double decay = 0.0);

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grads);

  std::int64_t steps_taken() const { return t_; }

 private:
  double learning_rate_;
  double decay_;
  std::int64_t t_ = 0;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
};

// Fully connected rectifier network with a linear output layer. Weights are
// initialized with the scaled-uniform fan-in scheme; training minimizes mean
// squared error with ADAM over shuffled mini-batches, applying inverted
// dropout to hidden activations.
class Mlp {
 public:
  static Mlp build(const MlpArchitecture& arch, std::uint64_t seed);

  const MlpArchitecture& architecture() const { return arch_; }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& inputs) const;  // inference

  // MSE plus analytic parameter gradient on a batch, dropout disabled.
  double loss_and_gradient(const Eigen::MatrixXd& inputs,
                           const Eigen::MatrixXd& targets,
                           Eigen::VectorXd& grad) const;

  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);
  Eigen::Index parameter_count() const;

  double final_training_loss() const { return final_training_loss_; }

  void save(const std::string& path) const;
  static Mlp load(const std::string& path);

  friend Mlp train(Mlp model, const LagSampleSet& samples,
                   const TrainConfig& cfg);

 private:
  Mlp() = default;

  MlpArchitecture arch_;
  std::vector<Eigen::MatrixXd> weights_;  // layer l: fan_in x fan_out
  std::vector<Eigen::VectorXd> biases_;
  double final_training_loss_ = 0.0;
};

// Trains on the sample set's training split; returns the model with updated
// weights and its post-training full-split MSE. Throws NumericError if the
// loss diverges.
Mlp train(Mlp model, const LagSampleSet& samples, const TrainConfig& cfg);

double evaluate_loss(const Mlp& model, const LagSampleSet& samples,
                     LagSampleSet::Split split);

// Day-by-day forecast over [start_day, start_day + horizon): exogenous inputs
// come from the series, groundwater inputs are the model's own predictions
// once the horizon is entered. Returns levels in groundwater units, one row
// per day, one column per well.
Eigen::MatrixXd dynamic_forecast(const Mlp& model, const DailySeries& series,
                                 const ScalingSpec& scaling, int start_day,
                                 int horizon);

}  // namespace surropt
