#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "copuf/harness/config.hpp"

namespace copuf::harness {

enum class RowKind { kMetrics, kAttack };

struct PublishedValues {
  std::optional<double> accuracy;
  std::optional<double> ber;        // at sigma = 0.05
  std::optional<double> ber_low;    // at sigma = 0.02
  std::optional<double> uniformity;
};

struct RecipeRow {
  std::string table;
  std::string id;            // unique within the table, e.g. "loop_a-z2-l4"
  RowKind kind = RowKind::kAttack;
  ExperimentConfig config;   // table defaults for this row
  PublishedValues published;
  bool desk_scale = true;    // false: shipped, skipped unless requested
};

const std::vector<std::string>& table_ids();
// Throws ConfigError naming the valid ids.
std::vector<RecipeRow> recipe_table(std::string_view table);

// Comma-separated tokens; each is a 1-based index, an exact id, or an id
// prefix ending at a '-' boundary ("loop_a" selects every Loop_A row).
// Empty selector returns all rows.
std::vector<RecipeRow> select_rows(const std::vector<RecipeRow>& rows, std::string_view selector);

}  // namespace copuf::harness
