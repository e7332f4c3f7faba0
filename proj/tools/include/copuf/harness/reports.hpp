#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace copuf::harness {

std::string new_experiment_id();

// {"id", "kind", "created", "tool_version", "command", "config", "inputs", "result"}
nlohmann::json make_record(const std::string& kind, const std::string& command,
                           const nlohmann::json& config, const nlohmann::json& inputs,
                           const nlohmann::json& result);

// One line per record, written with a single append so concurrent writers
// never interleave within a line.
void append_report(const std::filesystem::path& path, const nlohmann::json& record);
std::vector<nlohmann::json> read_reports(const std::filesystem::path& path);
// Exact id or unique id prefix.
std::optional<nlohmann::json> find_report(const std::filesystem::path& path, const std::string& id);

}  // namespace copuf::harness
