#include <chrono>
#include <cmath>
#include <numeric>

#include "copuf/errors.hpp"
#include "copuf/mlp.hpp"
#include "copuf/rng.hpp"

namespace copuf {

namespace {

struct AdamState {
  std::vector<DenseLayer> m;
  std::vector<DenseLayer> v;
  std::size_t t = 0;
};

std::vector<DenseLayer> zeros_like(const std::vector<DenseLayer>& layers) {
  std::vector<DenseLayer> out;
  for (const auto& L : layers) {
    out.push_back({Eigen::MatrixXd::Zero(L.weights.rows(), L.weights.cols()),
                   Eigen::VectorXd::Zero(L.bias.size())});
  }
  return out;
}

void adam_step(std::vector<DenseLayer>& params, const std::vector<DenseLayer>& grad, AdamState& s,
               const MlpConfig& cfg) {
  ++s.t;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(s.t));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(s.t));
  const double step = cfg.learning_rate * std::sqrt(c2) / c1;
  // Folded bias correction; epsilon is scaled so the update equals the
  // textbook lr * mhat / (sqrt(vhat) + eps).
  const double eps = cfg.epsilon * std::sqrt(c2);
  auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = (cfg.beta2 * v.array() + (1.0 - cfg.beta2) * g.array().square()).matrix();
    p.array() -= step * m.array() / (v.array().sqrt() + eps);
  };
  for (std::size_t i = 0; i < params.size(); ++i) {
    update(params[i].weights, grad[i].weights, s.m[i].weights, s.v[i].weights);
    update(params[i].bias, grad[i].bias, s.m[i].bias, s.v[i].bias);
  }
}

}  // namespace

TrainResult train(MlpModel model, const LabeledData& train_data, const LabeledData& val_data,
                  const MlpConfig& cfg, const EpochCallback& on_epoch) {
  if (train_data.empty()) throw ConfigError("training set is empty");
  if (val_data.empty()) throw ConfigError("validation set is empty");
  if (cfg.batch_size == 0) throw ConfigError("batch size must be >= 1");
  if (cfg.epochs == 0) throw ConfigError("epochs must be >= 1");
  if (!(cfg.learning_rate > 0)) throw ConfigError("learning rate must be > 0");

  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = train_data.size();
  const std::size_t batch = std::min(cfg.batch_size, n);
  AdamState adam{zeros_like(model.layers()), zeros_like(model.layers()), 0};
  std::vector<DenseLayer> grad;
  std::vector<Eigen::Index> order(n);
  Eigen::MatrixXd xb(train_data.x.rows(), static_cast<Eigen::Index>(batch));
  Eigen::VectorXd yb(static_cast<Eigen::Index>(batch));

  TrainResult result;
  MlpModel best = model;
  result.best_val_accuracy = -1.0;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(mix_seed(cfg.seed, stream::kShuffle, epoch));
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < n; begin += batch) {
      const std::size_t size = std::min(batch, n - begin);
      xb.conservativeResize(Eigen::NoChange, static_cast<Eigen::Index>(size));
      yb.conservativeResize(static_cast<Eigen::Index>(size));
      for (std::size_t j = 0; j < size; ++j) {
        xb.col(static_cast<Eigen::Index>(j)) = train_data.x.col(order[begin + j]);
        yb[static_cast<Eigen::Index>(j)] = train_data.y[order[begin + j]];
      }
      const double loss = loss_and_gradient(model, xb, yb, grad);
      if (!std::isfinite(loss)) {
        throw DivergenceError(epoch, "training loss became non-finite in epoch " + std::to_string(epoch));
      }
      loss_sum += loss * static_cast<double>(size);
      adam_step(model.layers(), grad, adam, cfg);
    }

    const double val = evaluate(model, val_data);
    result.history.push_back({epoch, loss_sum / static_cast<double>(n), val});
    if (on_epoch) on_epoch(result.history.back());
    if (val > result.best_val_accuracy) {
      result.best_val_accuracy = val;
      result.best_epoch = epoch;
      if (cfg.keep_best) best = model;
      since_best = 0;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      break;
    }
  }

  result.final_val_accuracy = result.history.back().val_accuracy;
  result.model = cfg.keep_best ? std::move(best) : std::move(model);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace copuf
