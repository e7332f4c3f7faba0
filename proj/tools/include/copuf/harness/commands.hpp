#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "copuf/harness/config.hpp"
#include "copuf/harness/recipes.hpp"

namespace copuf::harness {

/// Where a command writes its report and progress.
struct RunContext {
  std::string command_line;
  std::ostream* log = nullptr;   // progress lines; null for silence
  bool record = true;            // append to the reports file
};

// Every run_* returns the full report record (see make_record).
nlohmann::json run_gen(const ExperimentConfig& cfg, const std::filesystem::path& out,
                       const RunContext& ctx);
nlohmann::json run_metrics(const ExperimentConfig& cfg, const RunContext& ctx);
nlohmann::json run_crps(const ExperimentConfig& cfg, std::size_t count,
                        const std::filesystem::path& out, const std::filesystem::path& csv,
                        const RunContext& ctx);
// Trains on existing CRP files.
nlohmann::json run_attack(const ExperimentConfig& cfg, const std::filesystem::path& train,
                          const std::filesystem::path& val, const std::filesystem::path& test,
                          const RunContext& ctx);
// Splits one CRP file into contiguous train/validation/test parts.
nlohmann::json run_attack_split(const ExperimentConfig& cfg, const std::filesystem::path& data,
                                const RunContext& ctx);
// Generates train/validation/test CRPs in memory from the config seeds and attacks.
nlohmann::json run_pipeline(const ExperimentConfig& cfg, const RunContext& ctx,
                            const nlohmann::json& provenance = nlohmann::json::object());

// Re-executes a stored record from its embedded kind, config and inputs.
nlohmann::json rerun(const nlohmann::json& record, const RunContext& ctx);
// The fields that must match bit-for-bit between a record and its rerun.
nlohmann::json reproducible_part(const nlohmann::json& record);

struct ReproduceOptions {
  std::string table;
  std::string rows;                         // selector, empty = all
  std::vector<std::uint64_t> seeds{1};
  std::vector<nlohmann::json> patches;      // config file, then CLI flags
  double scale = 1.0;                       // multiplies train/validation sizes
  bool dry_run = false;
  bool include_large = false;
};

// One report per (row, seed). Plan or results go to out.
std::vector<nlohmann::json> reproduce(const ReproduceOptions& opts, std::ostream& out,
                                      const RunContext& ctx);

// The resolved per-run config for a recipe row and seed.
ExperimentConfig row_config(const RecipeRow& row, std::uint64_t seed, const ReproduceOptions& opts);

}  // namespace copuf::harness
