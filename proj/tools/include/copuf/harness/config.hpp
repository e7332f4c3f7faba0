#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "copuf/attack.hpp"
#include "copuf/descriptor.hpp"
#include "copuf/metrics.hpp"

namespace copuf::harness {

struct Seeds {
  std::uint64_t data = 1;     // CRP challenge/noise streams
  std::uint64_t model = 1;    // weight init and shuffling
  std::uint64_t metrics = 1;  // BER/uniformity challenge streams
};

struct DatasetSizes {
  std::size_t train = 20000;
  std::size_t validation = 5000;
  std::size_t test = 1000;

  std::size_t total() const { return train + validation + test; }
};

struct MlpSpec {
  unsigned l = 0;                    // 0 = choose_l
  std::vector<std::size_t> hidden;   // explicit widths win over l
  bool baseline = false;             // one hidden layer of 2^(k+1)
  std::size_t epochs = 100;
  std::size_t batch_size = 20;
  double learning_rate = 1e-3;
  std::size_t patience = 0;
  bool keep_best = true;
};

struct MetricsSpec {
  std::size_t challenges = 10000;
  std::size_t repeats = 11;
  Reference reference = Reference::kGolden;
};

/// Everything a command needs; serialized into every report.
struct ExperimentConfig {
  InstanceDescriptor instance;
  double sigma = 0.05;      // nominal noise for metrics
  double crp_sigma = 0.0;   // nominal noise on collected CRPs; 0 = noise-free
  Seeds seeds;
  DatasetSizes sizes;
  MlpSpec mlp;
  MetricsSpec metrics;
  unsigned threads = 1;
  std::string out_dir;      // empty: $COPUF_OUT_DIR, then ./copuf-out
};

nlohmann::json to_json(const ExperimentConfig& cfg);
// Missing keys keep their defaults. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);

// JSON with // and /* */ comments allowed.
nlohmann::json load_json_file(const std::filesystem::path& path);

// Applies patches in order (later wins) on top of base and parses the result.
ExperimentConfig resolve_config(const ExperimentConfig& base, const std::vector<nlohmann::json>& patches);

// Concrete trainer settings: widths from hidden, baseline or l, seed from seeds.model.
MlpConfig resolve_mlp(const ExperimentConfig& cfg);
unsigned effective_l(const ExperimentConfig& cfg);

std::filesystem::path output_dir(const ExperimentConfig& cfg);
std::filesystem::path reports_path(const ExperimentConfig& cfg);

}  // namespace copuf::harness
