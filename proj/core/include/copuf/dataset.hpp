#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "copuf/composite.hpp"

namespace copuf {

/// Binary CRP file layout (all integers little-endian):
///
///   offset size field
///        0    8 magic "COPUFCRP"
///        8    2 u16 format version (1)
///       10    2 u16 n
///       12    2 u16 k
///       14    8 u64 instance seed
///       22    8 f64 sigma used at collection (nominal)
///       30    8 u64 record count
///       38    4 u32 CRC-32 of bytes [0, 38)
///       42      records
///
/// Each record is ceil(n/8) challenge bytes followed by one response byte.
/// Challenge bit i (0-based) is bit (i % 8) of byte (i / 8), so bit 0 of
/// byte 0 holds challenge position 1.
inline constexpr char kCrpMagic[8] = {'C', 'O', 'P', 'U', 'F', 'C', 'R', 'P'};
inline constexpr std::uint16_t kCrpFormatVersion = 1;
inline constexpr std::size_t kCrpHeaderSize = 42;

struct CrpHeader {
  std::uint16_t version = kCrpFormatVersion;
  std::uint16_t n = 0;
  std::uint16_t k = 0;
  std::uint64_t instance_seed = 0;
  double sigma = 0.0;
  // In-memory provenance only; the binary layout has no slot for it.
  std::string arch;

  friend bool operator==(const CrpHeader&, const CrpHeader&) = default;
};

struct CrpRecord {
  Challenge challenge;
  std::uint8_t response = 0;
};

/// Packed challenge/response pairs in generation order.
class CrpSet {
 public:
  CrpSet() = default;
  explicit CrpSet(CrpHeader header);

  const CrpHeader& header() const noexcept { return header_; }
  CrpHeader& header() noexcept { return header_; }
  std::size_t n() const noexcept { return header_.n; }
  std::size_t size() const noexcept { return responses_.size(); }
  bool empty() const noexcept { return responses_.empty(); }
  std::size_t challenge_bytes() const noexcept { return (header_.n + 7) / 8; }
  std::size_t record_size() const noexcept { return challenge_bytes() + 1; }

  void reserve(std::size_t count);
  void resize(std::size_t count);
  void push_back(const Challenge& c, std::uint8_t response);
  void set(std::size_t i, const Challenge& c, std::uint8_t response);

  Challenge challenge(std::size_t i) const;
  // Unpacks record i into bits (size n).
  void unpack(std::size_t i, std::span<std::uint8_t> bits) const;
  std::uint8_t response(std::size_t i) const { return responses_[i]; }
  void set_response(std::size_t i, std::uint8_t r) { responses_[i] = r; }
  CrpRecord record(std::size_t i) const { return {challenge(i), responses_[i]}; }

  // Records [begin, begin + count) with the same header.
  CrpSet slice(std::size_t begin, std::size_t count) const;
  // CRC-32 over the serialized records; identifies dataset contents in reports.
  std::uint32_t fingerprint() const;

  std::span<const std::uint8_t> packed() const noexcept { return packed_; }
  std::span<const std::uint8_t> responses() const noexcept { return responses_; }

  friend bool operator==(const CrpSet&, const CrpSet&) = default;

 private:
  CrpHeader header_;
  std::vector<std::uint8_t> packed_;
  std::vector<std::uint8_t> responses_;
};

struct CrpSplit {
  CrpSet train;
  CrpSet validation;
  CrpSet test;
};

// `count` random challenges (chunked seeded streams), each evaluated once
// under `noise`. The header records the nominal sigma; instance seed, k and
// arch are left for the caller to fill in.
CrpSet generate_crps(const PufInstance& inst, std::size_t count, const NoiseModel& noise,
                     std::uint64_t seed, unsigned threads = 1);

// Contiguous slices in generation order.
CrpSplit split(const CrpSet& set, std::size_t train_n, std::size_t val_n, std::size_t test_n);

void write_crps(const CrpSet& set, const std::filesystem::path& path);
CrpSet read_crps(const std::filesystem::path& path);
// challenge as a 0/1 string (position 1 first), then the response.
void write_crps_csv(const CrpSet& set, const std::filesystem::path& path);

std::vector<std::uint8_t> serialize_header(const CrpHeader& header, std::uint64_t count);

}  // namespace copuf
