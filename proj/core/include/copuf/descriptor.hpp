#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "copuf/composite.hpp"

namespace copuf {

enum class Architecture { kApuf, kFf, kXorFf, kOaxFf, kMn, kIpuf };

std::string_view to_string(Architecture arch);
// Accepts "apuf", "ff", "xor-ff", "oax-ff", "mn", "ipuf".
Architecture parse_architecture(std::string_view text);

/// Self-describing recipe for a simulated instance. Everything needed to
/// rebuild the exact weights lives here; weights themselves are never stored.
struct InstanceDescriptor {
  Architecture arch = Architecture::kApuf;
  std::size_t n = 64;
  std::uint64_t seed = 0;
  std::string loop_id;     // e.g. "Loop_B" when the layout came from a named row
  LoopLayout loops;        // ff, xor-ff, oax-ff
  std::size_t x = 0;       // oax-ff OR count, ipuf lower count
  std::size_t y = 0;       // oax-ff AND count, ipuf upper count
  std::size_t z = 0;       // xor-ff / oax-ff XOR count
  std::array<std::size_t, 3> mn_sizes{32, 16, 8};
  std::size_t interpose_pos = 0;  // ipuf, 1-based; 0 means n/2 + 1
  double sigma = 0.05;            // nominal default for measurements

  std::size_t k() const { return end_count(loops); }
  std::size_t effective_interpose() const { return interpose_pos == 0 ? n / 2 + 1 : interpose_pos; }
  // Short label such as "ff[Loop_B]" or "(3,3)-ipuf".
  std::string label() const;

  friend bool operator==(const InstanceDescriptor&, const InstanceDescriptor&) = default;
};

// Throws ConfigError on invalid combinations.
void validate(const InstanceDescriptor& desc);
PufInstance build_instance(const InstanceDescriptor& desc);

nlohmann::json to_json(const InstanceDescriptor& desc);
InstanceDescriptor descriptor_from_json(const nlohmann::json& j);

void write_descriptor(const InstanceDescriptor& desc, const std::filesystem::path& path);
InstanceDescriptor read_descriptor(const std::filesystem::path& path);

}  // namespace copuf
