#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "copuf/dataset.hpp"
#include "copuf/descriptor.hpp"
#include "copuf/features.hpp"
#include "copuf/mlp.hpp"

namespace copuf {

// Hidden-size parameter l for the three-layer attack network. The first
// entry is the default; the rest are the alternatives worth trying:
//   apuf / ff      k + 1
//   mn             4
//   xor-ff         z + k + 1, z + k
//   oax-ff         x + y + z + k + 1, x + y + z + k, x + y + k - 1
//   ipuf           ceil(x/2 + y), then +1 and -1
std::vector<unsigned> l_candidates(Architecture arch, std::size_t k, std::size_t x,
                                   std::size_t y, std::size_t z);
unsigned choose_l(Architecture arch, std::size_t k, std::size_t x, std::size_t y, std::size_t z);
unsigned choose_l(const InstanceDescriptor& desc);

// Single hidden layer of 2^(k+1) tanh units.
std::vector<std::size_t> baseline_widths(std::size_t k);

struct AttackReport {
  double test_accuracy = 0.0;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_val_accuracy = 0.0;
  double final_val_accuracy = 0.0;
  double training_seconds = 0.0;
  MlpConfig config;
  std::size_t train_size = 0;
  std::size_t val_size = 0;
  std::size_t test_size = 0;
  std::uint32_t train_fingerprint = 0;
  std::uint32_t val_fingerprint = 0;
  std::uint32_t test_fingerprint = 0;
};

struct AttackResult {
  MlpModel model;
  AttackReport report;
};

// Builds features, trains from init_model(cfg) and scores the test set.
// cfg.input_dim is filled from the feature map when zero.
AttackResult run_attack(const CrpSet& train_set, const CrpSet& val_set, const CrpSet& test_set,
                        const FeatureMap& map, MlpConfig cfg, const EpochCallback& on_epoch = {});

nlohmann::json to_json(const MlpConfig& cfg);
MlpConfig mlp_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AttackReport& report);

}  // namespace copuf
