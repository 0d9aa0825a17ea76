#include "surropt/mlp.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "surropt/errors.hpp"
#include "surropt/rng.hpp"

namespace surropt {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEpsilon = 1e-8;

void validate(const MlpArchitecture& arch) {
  if (arch.input_width < 1 || arch.output_width < 1 ||
      arch.hidden_layers < 1 || arch.nodes_per_layer < 1) {
    throw InvalidArgument("MLP needs positive widths and at least one hidden layer");
  }
  if (arch.dropout_rate < 0.0 || arch.dropout_rate >= 1.0) {
    throw InvalidArgument("dropout rate must lie in [0, 1)");
  }
}

}  // namespace

AdamOptimizer::AdamOptimizer(Eigen::Index size, double learning_rate,
                             double decay)
    : learning_rate_(learning_rate),
      decay_(decay),
      m_(Eigen::VectorXd::Zero(size)),
      v_(Eigen::VectorXd::Zero(size)) {}

void AdamOptimizer::step(Eigen::VectorXd& params, const Eigen::VectorXd& grads) {
  ++t_;
  const double lr = learning_rate_ / (1.0 + decay_ * static_cast<double>(t_ - 1));
  m_ = kBeta1 * m_ + (1.0 - kBeta1) * grads;
  v_ = kBeta2 * v_ + (1.0 - kBeta2) * grads.cwiseProduct(grads);
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
  params -= lr * (m_ / c1).cwiseQuotient(((v_ / c2).cwiseSqrt().array() + kEpsilon).matrix());
}

Mlp Mlp::build(const MlpArchitecture& arch, std::uint64_t seed) {
  validate(arch);
  Mlp model;
  model.arch_ = arch;
  Rng rng(seed);
  int fan_in = arch.input_width;
  for (int layer = 0; layer <= arch.hidden_layers; ++layer) {
    const int fan_out =
        layer == arch.hidden_layers ? arch.output_width : arch.nodes_per_layer;
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd w(fan_in, fan_out);
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      w.data()[i] = rng.uniform(-bound, bound);
    }
    model.weights_.push_back(std::move(w));
    model.biases_.push_back(Eigen::VectorXd::Zero(fan_out));
    fan_in = fan_out;
  }
  return model;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& inputs) const {
  if (inputs.cols() != arch_.input_width) {
    throw InvalidArgument("input width does not match architecture");
  }
  Eigen::MatrixXd act = inputs;
  for (std::size_t layer = 0; layer < weights_.size(); ++layer) {
    act = (act * weights_[layer]).rowwise() + biases_[layer].transpose();
    if (layer + 1 < weights_.size()) act = act.cwiseMax(0.0);  // rectifier
  }
  return act;
}

Eigen::Index Mlp::parameter_count() const {
  Eigen::Index count = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    count += weights_[l].size() + biases_[l].size();
  }
  return count;
}

Eigen::VectorXd Mlp::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    flat.segment(at, weights_[l].size()) =
        Eigen::Map<const Eigen::VectorXd>(weights_[l].data(), weights_[l].size());
    at += weights_[l].size();
    flat.segment(at, biases_[l].size()) = biases_[l];
    at += biases_[l].size();
  }
  return flat;
}

void Mlp::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != parameter_count()) {
    throw InvalidArgument("flat parameter vector has the wrong length");
  }
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::Map<Eigen::VectorXd>(weights_[l].data(), weights_[l].size()) =
        flat.segment(at, weights_[l].size());
    at += weights_[l].size();
    biases_[l] = flat.segment(at, biases_[l].size());
    at += biases_[l].size();
  }
}

namespace {

// Forward/backward over one batch; when masks is non-null, inverted dropout
// with the given keep scale is applied to hidden activations.
double batch_loss_and_gradient(const std::vector<Eigen::MatrixXd>& weights,
                               const std::vector<Eigen::VectorXd>& biases,
                               const Eigen::MatrixXd& inputs,
                               const Eigen::MatrixXd& targets,
                               const std::vector<Eigen::MatrixXd>* masks,
                               std::vector<Eigen::MatrixXd>& grad_w,
                               std::vector<Eigen::VectorXd>& grad_b) {
  const std::size_t layers = weights.size();
  std::vector<Eigen::MatrixXd> activations(layers + 1);
  std::vector<Eigen::MatrixXd> pre(layers);
  activations[0] = inputs;
  for (std::size_t l = 0; l < layers; ++l) {
    pre[l] = (activations[l] * weights[l]).rowwise() + biases[l].transpose();
    if (l + 1 < layers) {
      Eigen::MatrixXd h = pre[l].cwiseMax(0.0);
      if (masks) h = h.cwiseProduct((*masks)[l]);
      activations[l + 1] = std::move(h);
    } else {
      activations[l + 1] = pre[l];
    }
  }

  const Eigen::MatrixXd diff = activations[layers] - targets;
  const double denom = static_cast<double>(diff.rows()) * diff.cols();
  const double loss = diff.squaredNorm() / denom;

  Eigen::MatrixXd delta = (2.0 / denom) * diff;
  for (std::size_t l = layers; l-- > 0;) {
    grad_w[l] = activations[l].transpose() * delta;
    grad_b[l] = delta.colwise().sum();
    if (l > 0) {
      delta = delta * weights[l].transpose();
      if (masks) delta = delta.cwiseProduct((*masks)[l - 1]);
      delta = delta.cwiseProduct(
          (pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return loss;
}

}  // namespace

double Mlp::loss_and_gradient(const Eigen::MatrixXd& inputs,
                              const Eigen::MatrixXd& targets,
                              Eigen::VectorXd& grad) const {
  std::vector<Eigen::MatrixXd> grad_w(weights_.size());
  std::vector<Eigen::VectorXd> grad_b(weights_.size());
  const double loss = batch_loss_and_gradient(weights_, biases_, inputs,
                                              targets, nullptr, grad_w, grad_b);
  grad.resize(parameter_count());
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    grad.segment(at, grad_w[l].size()) =
        Eigen::Map<const Eigen::VectorXd>(grad_w[l].data(), grad_w[l].size());
    at += grad_w[l].size();
    grad.segment(at, grad_b[l].size()) = grad_b[l];
    at += grad_b[l].size();
  }
  return loss;
}

Mlp train(Mlp model, const LagSampleSet& samples, const TrainConfig& cfg) {
  if (samples.input_width() != model.arch_.input_width) {
    throw InvalidArgument("sample width does not match the architecture");
  }
  if (samples.target_width() != model.arch_.output_width) {
    throw InvalidArgument("target width does not match the architecture");
  }
  if (cfg.epochs < 0 || cfg.batch_size < 1) {
    throw InvalidArgument("training needs nonnegative epochs and a positive batch");
  }

  const Eigen::MatrixXd train_x = samples.inputs(LagSampleSet::Split::train);
  const Eigen::MatrixXd train_y = samples.targets(LagSampleSet::Split::train);
  const int rows = static_cast<int>(train_x.rows());
  const double dropout = model.arch_.dropout_rate;
  const std::size_t layers = model.weights_.size();

  AdamOptimizer adam(model.parameter_count(), cfg.learning_rate, cfg.decay);
  Eigen::VectorXd params = model.parameters();
  std::vector<Eigen::MatrixXd> grad_w(layers);
  std::vector<Eigen::VectorXd> grad_b(layers);
  std::vector<int> order(rows);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // both the shuffle and the dropout masks are pinned to (seed, epoch)
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(epoch) + 1));
    for (int i = rows - 1; i > 0; --i) {
      std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    }
    for (int begin = 0; begin < rows; begin += cfg.batch_size) {
      const int count = std::min(cfg.batch_size, rows - begin);
      Eigen::MatrixXd batch_x(count, train_x.cols());
      Eigen::MatrixXd batch_y(count, train_y.cols());
      for (int r = 0; r < count; ++r) {
        batch_x.row(r) = train_x.row(order[begin + r]);
        batch_y.row(r) = train_y.row(order[begin + r]);
      }

      std::vector<Eigen::MatrixXd> masks;
      const std::vector<Eigen::MatrixXd>* mask_ptr = nullptr;
      if (dropout > 0.0) {
        masks.resize(layers - 1);
        const double keep = 1.0 - dropout;
        for (std::size_t l = 0; l + 1 < layers; ++l) {
          masks[l].resize(count, model.weights_[l].cols());
          for (Eigen::Index k = 0; k < masks[l].size(); ++k) {
            masks[l].data()[k] = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
          }
        }
        mask_ptr = &masks;
      }

      const double loss =
          batch_loss_and_gradient(model.weights_, model.biases_, batch_x,
                                  batch_y, mask_ptr, grad_w, grad_b);
      if (!std::isfinite(loss)) {
        throw NumericError("training diverged (non-finite loss) at epoch " +
                           std::to_string(epoch));
      }
      Eigen::VectorXd grad(model.parameter_count());
      Eigen::Index at = 0;
      for (std::size_t l = 0; l < layers; ++l) {
        grad.segment(at, grad_w[l].size()) = Eigen::Map<const Eigen::VectorXd>(
            grad_w[l].data(), grad_w[l].size());
        at += grad_w[l].size();
        grad.segment(at, grad_b[l].size()) = grad_b[l];
        at += grad_b[l].size();
      }
      adam.step(params, grad);
      model.set_parameters(params);
    }
  }

  model.final_training_loss_ =
      evaluate_loss(model, samples, LagSampleSet::Split::train);
  if (!std::isfinite(model.final_training_loss_)) {
    throw NumericError("training diverged (non-finite final loss)");
  }
  return model;
}

double evaluate_loss(const Mlp& model, const LagSampleSet& samples,
                     LagSampleSet::Split split) {
  const Eigen::MatrixXd outputs = model.forward(samples.inputs(split));
  const Eigen::MatrixXd diff = outputs - samples.targets(split);
  return diff.squaredNorm() / (static_cast<double>(diff.rows()) * diff.cols());
}

Eigen::MatrixXd dynamic_forecast(const Mlp& model, const DailySeries& series,
                                 const ScalingSpec& scaling, int start_day,
                                 int horizon) {
  const int lag = model.architecture().input_width / series.variable_count() - 1;
  if ((lag + 1) * series.variable_count() != model.architecture().input_width) {
    throw InvalidArgument("model input width is incompatible with the series");
  }
  if (model.architecture().output_width != series.well_count()) {
    throw InvalidArgument("model output width does not match the well count");
  }
  if (horizon < 0) throw InvalidArgument("horizon must be nonnegative");
  if (start_day < lag) {
    throw InvalidArgument("need " + std::to_string(lag) +
                          " days of history before the forecast start");
  }
  if (start_day + horizon > series.days()) {
    throw InvalidArgument("exogenous data does not cover the forecast horizon");
  }

  const int wells = series.well_count();
  Eigen::MatrixXd levels(horizon, wells);
  // scaled predictions for days inside the horizon; earlier days are observed
  Eigen::MatrixXd predicted(std::max(horizon, 1), wells);

  const auto scaled_gw = [&](int day, int well) -> double {
    if (day < start_day) {
      return scaling.scale_groundwater(well, series.groundwater(day, well));
    }
    return predicted(day - start_day, well);
  };

  Eigen::MatrixXd row(1, model.architecture().input_width);
  for (int k = 0; k < horizon; ++k) {
    const int anchor = start_day + k;
    int col = 0;
    for (int day = anchor - lag; day <= anchor; ++day) {
      for (int var = 0; var < series.variable_count(); ++var, ++col) {
        if (var < DailySeries::kExogenousColumns) {
          row(0, col) = scaling.variable(var).forward(series.variable(day, var));
        } else {
          const int well = var - DailySeries::kExogenousColumns;
          const int source_day = day == anchor ? day - 1 : day;
          row(0, col) = scaled_gw(source_day, well);
        }
      }
    }
    const Eigen::MatrixXd out = model.forward(row);
    for (int w = 0; w < wells; ++w) {
      predicted(k, w) = out(0, w);
      levels(k, w) = scaling.invert_groundwater(w, out(0, w));
    }
  }
  return levels;
}

void Mlp::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file '" + path + "'");
  out << "mlp 1\n"
      << arch_.input_width << ' ' << arch_.hidden_layers << ' '
      << arch_.nodes_per_layer << ' ' << arch_.output_width << ' '
      << arch_.dropout_rate << '\n';
  out.precision(17);
  const Eigen::VectorXd flat = parameters();
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    out << flat(i) << (i + 1 == flat.size() ? '\n' : ' ');
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

Mlp Mlp::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file '" + path + "'");
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "mlp" || version != 1) {
    throw DataError("'" + path + "' is not a model file");
  }
  MlpArchitecture arch;
  in >> arch.input_width >> arch.hidden_layers >> arch.nodes_per_layer >>
      arch.output_width >> arch.dropout_rate;
  if (!in) throw DataError("model file '" + path + "' has a malformed header");
  Mlp model = build(arch, 0);
  Eigen::VectorXd flat(model.parameter_count());
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    if (!(in >> flat(i))) {
      throw DataError("model file '" + path + "' is truncated");
    }
  }
  model.set_parameters(flat);
  return model;
}

}  // namespace surropt
