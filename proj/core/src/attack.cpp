#include "copuf/attack.hpp"

#include <cmath>

#include "copuf/errors.hpp"

namespace copuf {

std::vector<unsigned> l_candidates(Architecture arch, std::size_t k, std::size_t x, std::size_t y,
                                   std::size_t z) {
  auto u = [](std::size_t v) { return static_cast<unsigned>(v); };
  switch (arch) {
    case Architecture::kApuf:
    case Architecture::kFf:
      return {u(k + 1)};
    case Architecture::kMn:
      return {4};
    case Architecture::kXorFf:
      return {u(z + k + 1), u(z + k)};
    case Architecture::kOaxFf: {
      std::vector<unsigned> out{u(x + y + z + k + 1), u(x + y + z + k)};
      if (x + y + k >= 2) out.push_back(u(x + y + k - 1));
      return out;
    }
    case Architecture::kIpuf: {
      const auto base = u((x + 2 * y + 1) / 2);  // ceil(x/2 + y)
      std::vector<unsigned> out{base, base + 1};
      if (base > 1) out.push_back(base - 1);
      return out;
    }
  }
  throw ConfigError("unknown architecture");
}

unsigned choose_l(Architecture arch, std::size_t k, std::size_t x, std::size_t y, std::size_t z) {
  return std::max(1u, l_candidates(arch, k, x, y, z).front());
}

unsigned choose_l(const InstanceDescriptor& desc) {
  return choose_l(desc.arch, desc.k(), desc.x, desc.y, desc.z);
}

std::vector<std::size_t> baseline_widths(std::size_t k) {
  if (k + 1 >= 20) throw ConfigError("baseline width too large");
  return {std::size_t{1} << (k + 1)};
}

AttackResult run_attack(const CrpSet& train_set, const CrpSet& val_set, const CrpSet& test_set,
                        const FeatureMap& map, MlpConfig cfg, const EpochCallback& on_epoch) {
  if (train_set.n() != val_set.n() || train_set.n() != test_set.n()) {
    throw ConfigError("train/validation/test sets have different challenge lengths");
  }
  const std::size_t dim = map.dim(train_set.n());
  if (cfg.input_dim == 0) cfg.input_dim = dim;
  if (cfg.input_dim != dim) {
    throw ConfigError("configured input dimension " + std::to_string(cfg.input_dim) +
                      " does not match feature dimension " + std::to_string(dim));
  }
  const LabeledData train_data = make_labeled(train_set, map);
  const LabeledData val_data = make_labeled(val_set, map);
  const LabeledData test_data = make_labeled(test_set, map);

  TrainResult trained = train(init_model(cfg), train_data, val_data, cfg, on_epoch);

  AttackResult out;
  AttackReport& r = out.report;
  r.test_accuracy = evaluate(trained.model, test_data);
  r.history = std::move(trained.history);
  r.best_epoch = trained.best_epoch;
  r.best_val_accuracy = trained.best_val_accuracy;
  r.final_val_accuracy = trained.final_val_accuracy;
  r.training_seconds = trained.seconds;
  r.config = cfg;
  r.train_size = train_set.size();
  r.val_size = val_set.size();
  r.test_size = test_set.size();
  r.train_fingerprint = train_set.fingerprint();
  r.val_fingerprint = val_set.fingerprint();
  r.test_fingerprint = test_set.fingerprint();
  out.model = std::move(trained.model);
  return out;
}

nlohmann::json to_json(const MlpConfig& c) {
  return {
      {"input_dim", c.input_dim},   {"hidden", c.hidden},
      {"epochs", c.epochs},         {"batch_size", c.batch_size},
      {"learning_rate", c.learning_rate},
      {"beta1", c.beta1},           {"beta2", c.beta2},
      {"epsilon", c.epsilon},       {"seed", c.seed},
      {"keep_best", c.keep_best},   {"patience", c.patience},
  };
}

MlpConfig mlp_config_from_json(const nlohmann::json& j) {
  try {
    MlpConfig c;
    c.input_dim = j.value("input_dim", c.input_dim);
    c.hidden = j.value("hidden", c.hidden);
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.seed = j.value("seed", c.seed);
    c.keep_best = j.value("keep_best", c.keep_best);
    c.patience = j.value("patience", c.patience);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad MLP config: ") + e.what());
  }
}

nlohmann::json to_json(const AttackReport& r) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& e : r.history) {
    history.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val_accuracy", e.val_accuracy}});
  }
  return {
      {"test_accuracy", r.test_accuracy},
      {"best_epoch", r.best_epoch},
      {"best_val_accuracy", r.best_val_accuracy},
      {"final_val_accuracy", r.final_val_accuracy},
      {"training_seconds", r.training_seconds},
      {"mlp", to_json(r.config)},
      {"sizes", {{"train", r.train_size}, {"validation", r.val_size}, {"test", r.test_size}}},
      {"fingerprints",
       {{"train", r.train_fingerprint}, {"validation", r.val_fingerprint}, {"test", r.test_fingerprint}}},
      {"history", history},
  };
}

}  // namespace copuf
