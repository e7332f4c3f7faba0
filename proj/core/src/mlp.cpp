#include "copuf/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "copuf/dataset.hpp"
#include "copuf/errors.hpp"
#include "copuf/features.hpp"
#include "copuf/rng.hpp"

namespace copuf {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Activations per layer: acts[0] = x, acts[i] = tanh(...) for hidden, and the
// last entry holds the output logits.
void forward_all(const std::vector<DenseLayer>& layers, const Eigen::MatrixXd& x,
                 std::vector<Eigen::MatrixXd>& acts) {
  acts.resize(layers.size() + 1);
  acts[0] = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    acts[i + 1].noalias() = layers[i].weights * acts[i];
    acts[i + 1].colwise() += layers[i].bias;
    if (i + 1 < layers.size()) acts[i + 1] = acts[i + 1].array().tanh();
  }
}

double bce_from_logits(const Eigen::RowVectorXd& logits, const Eigen::VectorXd& y) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < logits.size(); ++j) sum += softplus(logits[j]) - y[j] * logits[j];
  return sum / static_cast<double>(logits.size());
}

void check_shapes(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (model.layers().empty()) throw ConfigError("model has no layers");
  if (static_cast<std::size_t>(x.rows()) != model.input_dim()) {
    throw ConfigError("feature dimension " + std::to_string(x.rows()) +
                      " does not match model input " + std::to_string(model.input_dim()));
  }
  if (x.cols() != y.size()) throw ConfigError("feature and label counts differ");
  if (x.cols() == 0) throw ConfigError("empty sample set");
}

}  // namespace

std::vector<std::size_t> three_layer_widths(unsigned l) {
  if (l < 1 || l > 20) throw ConfigError("hidden-size parameter l must be in 1..20");
  const std::size_t w = std::size_t{1} << l;
  return {w / 2, w, w / 2};
}

MlpModel::MlpModel(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& L = layers_[i];
    if (L.weights.rows() != L.bias.size()) throw ConfigError("layer bias size mismatch");
    if (i > 0 && L.weights.cols() != layers_[i - 1].weights.rows()) {
      throw ConfigError("layer widths do not chain");
    }
  }
  if (!layers_.empty() && layers_.back().weights.rows() != 1) {
    throw ConfigError("output layer must have one unit");
  }
}

std::size_t MlpModel::input_dim() const {
  return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.front().weights.cols());
}

std::vector<std::size_t> MlpModel::hidden_widths() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
    out.push_back(static_cast<std::size_t>(layers_[i].weights.rows()));
  }
  return out;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t total = 0;
  for (const auto& L : layers_) total += static_cast<std::size_t>(L.weights.size() + L.bias.size());
  return total;
}

double MlpModel::forward(std::span<const double> features) const {
  Eigen::Map<const Eigen::VectorXd> x(features.data(), static_cast<Eigen::Index>(features.size()));
  return predict(Eigen::MatrixXd(x))[0];
}

Eigen::VectorXd MlpModel::predict(const Eigen::MatrixXd& x) const {
  if (static_cast<std::size_t>(x.rows()) != input_dim()) {
    throw ConfigError("feature dimension " + std::to_string(x.rows()) +
                      " does not match model input " + std::to_string(input_dim()));
  }
  std::vector<Eigen::MatrixXd> acts;
  forward_all(layers_, x, acts);
  Eigen::VectorXd p(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) p[j] = sigmoid(acts.back()(0, j));
  return p;
}

MlpModel zero_model(std::size_t input_dim, const std::vector<std::size_t>& hidden) {
  if (input_dim == 0) throw ConfigError("input dimension must be >= 1");
  std::vector<DenseLayer> layers;
  std::size_t in = input_dim;
  auto widths = hidden;
  widths.push_back(1);
  for (auto out : widths) {
    if (out == 0) throw ConfigError("hidden widths must be >= 1");
    layers.push_back({Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in)),
                      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out))});
    in = out;
  }
  return MlpModel(std::move(layers));
}

MlpModel init_model(const MlpConfig& cfg) {
  MlpModel model = zero_model(cfg.input_dim, cfg.hidden);
  Rng rng(mix_seed(cfg.seed, stream::kInit));
  for (auto& L : model.layers()) {
    const double limit = std::sqrt(6.0 / static_cast<double>(L.weights.rows() + L.weights.cols()));
    // Column-major fill order, fixed by the seed.
    for (Eigen::Index i = 0; i < L.weights.size(); ++i) {
      L.weights.data()[i] = (2.0 * rng.uniform() - 1.0) * limit;
    }
  }
  return model;
}

LabeledData make_labeled(const CrpSet& set, const FeatureMap& map) {
  const std::size_t dim = map.dim(set.n());
  LabeledData data;
  data.x.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(set.size()));
  data.y.resize(static_cast<Eigen::Index>(set.size()));
  std::vector<std::uint8_t> bits(set.n());
  for (std::size_t i = 0; i < set.size(); ++i) {
    set.unpack(i, bits);
    map.apply(bits, {data.x.col(static_cast<Eigen::Index>(i)).data(), dim});
    data.y[static_cast<Eigen::Index>(i)] = set.response(i);
  }
  return data;
}

double loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         std::vector<DenseLayer>& gradient) {
  check_shapes(model, x, y);
  const auto& layers = model.layers();
  std::vector<Eigen::MatrixXd> acts;
  forward_all(layers, x, acts);
  const Eigen::RowVectorXd logits = acts.back().row(0);
  const double loss = bce_from_logits(logits, y);

  const double inv_n = 1.0 / static_cast<double>(x.cols());
  Eigen::MatrixXd delta(1, x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) delta(0, j) = (sigmoid(logits[j]) - y[j]) * inv_n;

  gradient.resize(layers.size());
  for (std::size_t i = layers.size(); i-- > 0;) {
    gradient[i].weights.noalias() = delta * acts[i].transpose();
    gradient[i].bias = delta.rowwise().sum();
    if (i == 0) break;
    Eigen::MatrixXd back = layers[i].weights.transpose() * delta;
    delta = back.array() * (1.0 - acts[i].array().square());
  }
  return loss;
}

double mean_loss(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  check_shapes(model, x, y);
  std::vector<Eigen::MatrixXd> acts;
  forward_all(model.layers(), x, acts);
  return bce_from_logits(acts.back().row(0), y);
}

GradientCheck gradient_check(const MlpModel& model, const Eigen::MatrixXd& x,
                             const Eigen::VectorXd& y, double step) {
  std::vector<DenseLayer> analytic;
  loss_and_gradient(model, x, y, analytic);
  MlpModel probe = model;
  GradientCheck result;
  auto visit = [&](double& param, double a) {
    const double saved = param;
    param = saved + step;
    const double up = mean_loss(probe, x, y);
    param = saved - step;
    const double down = mean_loss(probe, x, y);
    param = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
    result.max_relative_error = std::max(result.max_relative_error, rel);
    result.max_abs_analytic = std::max(result.max_abs_analytic, std::abs(a));
    result.max_abs_numeric = std::max(result.max_abs_numeric, std::abs(numeric));
    if (std::abs(a) > 1e-6 && a * numeric < 0) ++result.sign_mismatches;
  };
  for (std::size_t l = 0; l < probe.layers().size(); ++l) {
    auto& L = probe.layers()[l];
    for (Eigen::Index i = 0; i < L.weights.size(); ++i) visit(L.weights.data()[i], analytic[l].weights.data()[i]);
    for (Eigen::Index i = 0; i < L.bias.size(); ++i) visit(L.bias[i], analytic[l].bias[i]);
  }
  return result;
}

double evaluate(const MlpModel& model, const LabeledData& data) {
  if (data.empty()) throw ConfigError("cannot evaluate on an empty set");
  const Eigen::VectorXd p = model.predict(data.x);
  std::size_t correct = 0;
  for (Eigen::Index j = 0; j < p.size(); ++j) correct += ((p[j] >= 0.5 ? 1.0 : 0.0) == data.y[j]);
  return static_cast<double>(correct) / static_cast<double>(p.size());
}

}  // namespace copuf
