#include <gtest/gtest.h>

#include <cmath>

#include "copuf/attack.hpp"
#include "copuf/errors.hpp"

namespace {

using namespace copuf;

Eigen::MatrixXd random_inputs(std::size_t dim, std::size_t count, Rng& rng) {
  Eigen::MatrixXd x(dim, count);
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = rng.bit() ? 1.0 : -1.0;
  return x;
}

Eigen::VectorXd random_labels(std::size_t count, Rng& rng) {
  Eigen::VectorXd y(count);
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = rng.bit();
  return y;
}

MlpModel random_small_model(Rng& rng, std::size_t& dim) {
  dim = 2 + rng.below(7);
  std::vector<std::size_t> hidden;
  const std::size_t layers = rng.below(4);
  for (std::size_t i = 0; i < layers; ++i) hidden.push_back(1 + rng.below(16 / std::max<std::size_t>(layers, 1)));
  MlpConfig cfg;
  cfg.input_dim = dim;
  cfg.hidden = hidden;
  cfg.seed = rng.next_u64();
  auto model = init_model(cfg);
  for (auto& layer : model.layers())
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = rng.gaussian(0.0, 0.3);
  return model;
}

TEST(Mlp, ThreeLayerWidths) {
  EXPECT_EQ(three_layer_widths(3), (std::vector<std::size_t>{4, 8, 4}));
  EXPECT_EQ(three_layer_widths(5), (std::vector<std::size_t>{16, 32, 16}));
  EXPECT_THROW(three_layer_widths(0), ConfigError);
}

TEST(Mlp, GradientCheckRandomConfigs) {
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    std::size_t dim = 0;
    const auto model = random_small_model(rng, dim);
    const std::size_t batch = 1 + rng.below(8);
    const auto x = random_inputs(dim, batch, rng);
    const auto y = random_labels(batch, rng);
    const auto check = gradient_check(model, x, y);
    ASSERT_LT(check.max_relative_error, 1e-4) << "config " << t;
    ASSERT_EQ(check.sign_mismatches, 0u);
  }
}

TEST(Mlp, GradientCheckZeroPoint) {
  const auto model = zero_model(4, {3, 5, 3});
  Rng rng(2);
  const auto x = random_inputs(4, 6, rng);
  Eigen::VectorXd y(6);
  y << 0, 1, 0, 1, 0, 1;
  const auto check = gradient_check(model, x, y);
  EXPECT_LT(check.max_abs_analytic, 1e-8);
  EXPECT_LT(check.max_abs_numeric, 1e-8);
}

TEST(Mlp, ZeroModelIsHalf) {
  const auto model = zero_model(64, {4, 8, 4});
  Rng rng(3);
  const auto x = random_inputs(64, 10, rng);
  const auto p = model.predict(x);
  for (Eigen::Index i = 0; i < p.size(); ++i) EXPECT_EQ(p(i), 0.5);
  std::vector<double> row(64, 1.0);
  EXPECT_EQ(model.forward(row), 0.5);
}

TEST(Mlp, OutputBiasMonotone) {
  MlpConfig cfg;
  cfg.input_dim = 10;
  cfg.hidden = {4, 8, 4};
  cfg.seed = 4;
  auto model = init_model(cfg);
  std::vector<double> row(10, -1.0);
  double previous = 0.0;
  for (double b : {-2.0, -1.0, 0.0, 0.5, 3.0}) {
    model.layers().back().bias(0) = b;
    const double p = model.forward(row);
    EXPECT_GT(p, previous);
    EXPECT_LT(p, 1.0);
    previous = p;
  }
}

TEST(Mlp, NoHiddenLayerIsLogistic) {
  MlpConfig cfg;
  cfg.input_dim = 5;
  cfg.seed = 5;
  const auto model = init_model(cfg);
  ASSERT_EQ(model.layers().size(), 1u);
  const std::vector<double> row{1, -1, 1, 1, -1};
  const auto& w = model.layers()[0].weights;
  double z = model.layers()[0].bias(0);
  for (int i = 0; i < 5; ++i) z += w(0, i) * row[i];
  EXPECT_NEAR(model.forward(row), 1.0 / (1.0 + std::exp(-z)), 1e-15);
}

TEST(Mlp, InitBoundAndDeterminism) {
  MlpConfig cfg;
  cfg.input_dim = 62;
  cfg.hidden = {8, 16, 8};
  cfg.seed = 6;
  const auto a = init_model(cfg);
  const auto b = init_model(cfg);
  for (std::size_t l = 0; l < a.layers().size(); ++l) {
    const auto& w = a.layers()[l].weights;
    const double bound = std::sqrt(6.0 / double(w.rows() + w.cols()));
    EXPECT_LE(w.cwiseAbs().maxCoeff(), bound);
    EXPECT_TRUE(a.layers()[l].bias.isZero());
    EXPECT_EQ(w, b.layers()[l].weights);
  }
  cfg.seed = 7;
  EXPECT_NE(init_model(cfg).layers()[0].weights, a.layers()[0].weights);
}

TEST(Mlp, ShapeErrors) {
  const auto model = zero_model(4, {3});
  EXPECT_THROW(model.forward(std::vector<double>(5, 1.0)), ConfigError);
  std::vector<DenseLayer> bad{{Eigen::MatrixXd::Zero(3, 4), Eigen::VectorXd::Zero(3)},
                              {Eigen::MatrixXd::Zero(1, 2), Eigen::VectorXd::Zero(1)}};
  EXPECT_THROW(MlpModel{bad}, ConfigError);
}

TEST(Evaluate, ConstantModelScoresMajorityClass) {
  LabeledData d;
  Rng rng(8);
  d.x = random_inputs(6, 200, rng);
  d.y = Eigen::VectorXd::Zero(200);
  for (int i = 0; i < 130; ++i) d.y(i) = 1;
  // p == 0.5 predicts 1
  EXPECT_DOUBLE_EQ(evaluate(zero_model(6, {2}), d), 0.65);
  EXPECT_THROW(evaluate(zero_model(6, {2}), LabeledData{}), ConfigError);
}

struct ApufSets {
  CrpSet train, val, test;
};

ApufSets apuf_sets(std::size_t n_train) {
  const auto set = generate_crps(ApufInstance::create(9, 64), n_train + 2000, NoiseModel{}, 10);
  auto s = split(set, n_train, 1000, 1000);
  return {s.train, s.validation, s.test};
}

MlpConfig small_cfg(std::uint64_t seed) {
  MlpConfig cfg;
  cfg.hidden = three_layer_widths(1);
  cfg.epochs = 30;
  cfg.batch_size = 20;
  cfg.learning_rate = 3e-3;
  cfg.seed = seed;
  return cfg;
}

TEST(Train, LearnsPlainApuf) {
  const auto d = apuf_sets(5000);
  const auto r = run_attack(d.train, d.val, d.test, FeatureMap::plain(), small_cfg(11));
  EXPECT_GT(r.report.test_accuracy, 0.95);
  EXPECT_EQ(r.report.history.size(), 30u);
  EXPECT_GE(r.report.best_val_accuracy, r.report.final_val_accuracy);
}

TEST(Train, Deterministic) {
  const auto d = apuf_sets(2000);
  auto cfg = small_cfg(12);
  cfg.epochs = 5;
  const auto a = run_attack(d.train, d.val, d.test, FeatureMap::plain(), cfg);
  const auto b = run_attack(d.train, d.val, d.test, FeatureMap::plain(), cfg);
  EXPECT_EQ(a.report.test_accuracy, b.report.test_accuracy);
  ASSERT_EQ(a.report.history.size(), b.report.history.size());
  for (std::size_t i = 0; i < a.report.history.size(); ++i)
    EXPECT_EQ(a.report.history[i].train_loss, b.report.history[i].train_loss);
  for (std::size_t l = 0; l < a.model.layers().size(); ++l)
    EXPECT_EQ(a.model.layers()[l].weights, b.model.layers()[l].weights);
}

TEST(Train, CoinFlipLabelsGiveChance) {
  auto d = apuf_sets(5000);
  Rng rng(13);
  for (auto* set : {&d.train, &d.val, &d.test})
    for (std::size_t i = 0; i < set->size(); ++i) set->set_response(i, rng.bit());
  auto cfg = small_cfg(14);
  cfg.epochs = 10;
  const auto r = run_attack(d.train, d.val, d.test, FeatureMap::plain(), cfg);
  EXPECT_NEAR(r.report.test_accuracy, 0.5, 0.04);
}

TEST(Train, ShuffledTestLabelsDropToChance) {
  auto d = apuf_sets(5000);
  const auto r = run_attack(d.train, d.val, d.test, FeatureMap::plain(), small_cfg(15));
  Rng rng(16);
  auto test = d.test;
  for (std::size_t i = test.size() - 1; i > 0; --i) {
    const std::size_t j = rng.below(i + 1);
    const auto t = test.response(i);
    test.set_response(i, test.response(j));
    test.set_response(j, t);
  }
  EXPECT_NEAR(evaluate(r.model, make_labeled(test, FeatureMap::plain())), 0.5, 0.04);
}

TEST(Train, BestValidationNotBelowFinal) {
  const auto d = apuf_sets(1000);
  auto cfg = small_cfg(17);
  cfg.epochs = 15;
  cfg.learning_rate = 2e-2;
  const auto labeled_train = make_labeled(d.train, FeatureMap::plain());
  const auto labeled_val = make_labeled(d.val, FeatureMap::plain());
  cfg.input_dim = 64;
  const auto r = train(init_model(cfg), labeled_train, labeled_val, cfg);
  EXPECT_GE(evaluate(r.model, labeled_val), r.final_val_accuracy);
  EXPECT_EQ(evaluate(r.model, labeled_val), r.best_val_accuracy);
  EXPECT_EQ(r.history[r.best_epoch - 1].val_accuracy, r.best_val_accuracy);
}

TEST(Train, DivergenceReportsEpoch) {
  const auto d = apuf_sets(500);
  auto cfg = small_cfg(18);
  cfg.input_dim = 64;
  cfg.learning_rate = std::numeric_limits<double>::infinity();
  try {
    train(init_model(cfg), make_labeled(d.train, FeatureMap::plain()), make_labeled(d.val, FeatureMap::plain()), cfg);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_GE(e.epoch(), 1u);
  }
}

TEST(Train, EpochCallbackAndPatience) {
  const auto d = apuf_sets(1000);
  auto cfg = small_cfg(19);
  cfg.epochs = 200;
  cfg.patience = 3;
  std::size_t calls = 0;
  const auto r = run_attack(d.train, d.val, d.test, FeatureMap::plain(), cfg,
                            [&](const EpochRecord& e) { EXPECT_EQ(e.epoch, ++calls); });
  EXPECT_EQ(calls, r.report.history.size());
  EXPECT_LT(calls, 200u);
}

TEST(Attack, LRules) {
  EXPECT_EQ(choose_l(Architecture::kFf, 2, 0, 0, 0), 3u);
  EXPECT_EQ(three_layer_widths(choose_l(Architecture::kFf, 2, 0, 0, 0)), (std::vector<std::size_t>{4, 8, 4}));
  EXPECT_EQ(choose_l(Architecture::kXorFf, 1, 0, 0, 2), 4u);
  EXPECT_EQ(choose_l(Architecture::kIpuf, 0, 3, 3, 0), 5u);
  EXPECT_EQ(choose_l(Architecture::kMn, 0, 0, 0, 0), 4u);
  EXPECT_EQ(choose_l(Architecture::kOaxFf, 1, 2, 3, 1), 8u);
  EXPECT_EQ(l_candidates(Architecture::kXorFf, 1, 0, 0, 2), (std::vector<unsigned>{4, 3}));
  EXPECT_EQ(l_candidates(Architecture::kOaxFf, 1, 2, 3, 1), (std::vector<unsigned>{8, 7, 5}));
  EXPECT_EQ(l_candidates(Architecture::kIpuf, 0, 1, 7, 0), (std::vector<unsigned>{8, 9, 7}));
  EXPECT_EQ(baseline_widths(2), (std::vector<std::size_t>{8}));
}

TEST(Attack, ReportJson) {
  const auto d = apuf_sets(1000);
  auto cfg = small_cfg(20);
  cfg.epochs = 2;
  const auto r = run_attack(d.train, d.val, d.test, FeatureMap::plain(), cfg);
  const auto j = to_json(r.report);
  EXPECT_EQ(j.at("test_accuracy").get<double>(), r.report.test_accuracy);
  EXPECT_EQ(j.at("history").size(), 2u);
  const auto back = mlp_config_from_json(to_json(r.report.config));
  EXPECT_EQ(back.hidden, r.report.config.hidden);
  EXPECT_EQ(back.seed, 20u);
  EXPECT_EQ(back.input_dim, 64u);
}

TEST(Attack, DimensionMismatch) {
  const auto d = apuf_sets(100);
  const auto other = generate_crps(ApufInstance::create(1, 32), 10, NoiseModel{}, 1);
  EXPECT_THROW(run_attack(d.train, d.val, other, FeatureMap::plain(), small_cfg(1)), ConfigError);
}

}  // namespace
