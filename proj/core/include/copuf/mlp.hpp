#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace copuf {

class CrpSet;
class FeatureMap;

/// Attack network hyperparameters. Hidden layers use tanh, the single
/// output unit uses a sigmoid. Optimizer is Adam on mean binary
/// cross-entropy.
struct MlpConfig {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden;
  std::size_t epochs = 100;
  std::size_t batch_size = 20;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  bool keep_best = true;      // return the best-validation parameters
  std::size_t patience = 0;   // stop after this many epochs without improvement; 0 = never
};

// (2^(l-1), 2^l, 2^(l-1))
std::vector<std::size_t> three_layer_widths(unsigned l);

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
};

class MlpModel {
 public:
  MlpModel() = default;
  explicit MlpModel(std::vector<DenseLayer> layers);

  std::size_t input_dim() const;
  std::vector<std::size_t> hidden_widths() const;
  std::size_t parameter_count() const;
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& layers() noexcept { return layers_; }

  // Probability of response 1.
  double forward(std::span<const double> features) const;
  // x is dim x N (one sample per column); returns N probabilities.
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;

 private:
  std::vector<DenseLayer> layers_;
};

// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
MlpModel init_model(const MlpConfig& cfg);
MlpModel zero_model(std::size_t input_dim, const std::vector<std::size_t>& hidden);

struct LabeledData {
  Eigen::MatrixXd x;  // dim x N
  Eigen::VectorXd y;  // N labels in {0, 1}

  std::size_t size() const noexcept { return static_cast<std::size_t>(y.size()); }
  bool empty() const noexcept { return y.size() == 0; }
};

LabeledData make_labeled(const CrpSet& set, const FeatureMap& map);

// Mean binary cross-entropy and its gradient, laid out like the model.
double loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& x,
                         const Eigen::VectorXd& y, std::vector<DenseLayer>& gradient);
double mean_loss(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

struct GradientCheck {
  double max_relative_error = 0.0;
  double max_abs_analytic = 0.0;
  double max_abs_numeric = 0.0;
  // Parameters with |analytic| > 1e-6 whose numeric estimate has the other sign.
  std::size_t sign_mismatches = 0;
};

// Central differences with the given step on every parameter. The relative
// error of one parameter is |a - n| / max(|a|, |n|, 1e-6).
GradientCheck gradient_check(const MlpModel& model, const Eigen::MatrixXd& x,
                             const Eigen::VectorXd& y, double step = 1e-5);

// Fraction of samples with (p >= 0.5) == label. Throws ConfigError when empty.
double evaluate(const MlpModel& model, const LabeledData& data);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult {
  MlpModel model;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_val_accuracy = 0.0;
  double final_val_accuracy = 0.0;
  double seconds = 0.0;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Mini-batch Adam for cfg.epochs. Batch order is a per-epoch Fisher-Yates
// shuffle seeded from cfg.seed. Throws DivergenceError on a non-finite loss.
TrainResult train(MlpModel model, const LabeledData& train_data, const LabeledData& val_data,
                  const MlpConfig& cfg, const EpochCallback& on_epoch = {});

}  // namespace copuf
