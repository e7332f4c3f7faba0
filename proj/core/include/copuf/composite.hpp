#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "copuf/puf_core.hpp"

namespace copuf {

/// Geometry of one intermediate arbiter, in 1-based stage numbering:
/// the arbiter sits after stage `arbiter_stage` and its bit overwrites the
/// challenge at every position in `end_positions`.
struct LoopSite {
  std::size_t arbiter_stage = 0;
  std::vector<std::size_t> end_positions;

  friend bool operator==(const LoopSite&, const LoopSite&) = default;
};

using LoopLayout = std::vector<LoopSite>;

// "15->25,30" or "8->62;16->63;32->64". The arrow may also be written as the
// Unicode right arrow.
LoopLayout parse_loop_layout(std::string_view text);
std::string format_loop_layout(const LoopLayout& layout);

// Loop_A .. Loop_G for 64-stage chains.
const std::vector<std::pair<std::string, LoopLayout>>& named_loop_layouts();
// Accepts a configuration ID ("Loop_B", "loop_b", "B") or an explicit layout.
LoopLayout resolve_loop_layout(std::string_view id_or_layout);

// Throws ConfigError unless 1 <= s < n, s < e <= n for all ends, ends are
// unique across the layout, and the total end count k < n.
void validate_loop_layout(const LoopLayout& layout, std::size_t n);
std::size_t end_count(const LoopLayout& layout);
// All end positions, sorted ascending (1-based).
std::vector<std::size_t> sorted_end_positions(const LoopLayout& layout);

struct LoopSpec {
  LoopSite site;
  double arbiter_bias = 0.0;
};

struct FfApufInstance {
  ApufInstance base;
  std::vector<LoopSpec> loops;  // ascending arbiter_stage

  std::size_t n() const noexcept { return base.n; }
  std::size_t k() const noexcept;
  LoopLayout layout() const;

  // Base weights are derive_weights(seed, n); arbiter biases are N(0,1)
  // draws from a stream derived from the same seed.
  static FfApufInstance create(std::uint64_t seed, std::size_t n, const LoopLayout& layout);
};

struct XorFfInstance {
  std::vector<FfApufInstance> members;
};

struct OaxFfInstance {
  std::vector<FfApufInstance> or_members;
  std::vector<FfApufInstance> and_members;
  std::vector<FfApufInstance> xor_members;
};

struct MnApufInstance {
  ApufInstance main;
  // aux[0] drives 1-based position n, aux[1] n-1, aux[2] n-2. An auxiliary
  // of size S reads the challenge prefix c[1..S].
  std::array<ApufInstance, 3> aux;
};

struct IpufInstance {
  std::vector<ApufInstance> lower;  // x chains, n stages, produce the interposed bit
  std::vector<ApufInstance> upper;  // y chains, n+1 stages, produce the response
  std::size_t interpose_pos = 0;    // 1-based position in the (n+1)-bit challenge
};

// Seed of the index-th component of a composite instance.
std::uint64_t member_seed(std::uint64_t instance_seed, std::size_t index);

// Member i of an XOR/OAX instance uses member_seed(seed, i), counting
// OR members first, then AND, then XOR. A (0,0,z) OAX instance therefore has
// exactly the members of the z-XOR instance with the same seed.
XorFfInstance make_xor_ff(std::uint64_t seed, std::size_t n, const LoopLayout& layout,
                          std::size_t z);
OaxFfInstance make_oax_ff(std::uint64_t seed, std::size_t n, const LoopLayout& layout,
                          std::size_t x, std::size_t y, std::size_t z);
MnApufInstance make_mn(std::uint64_t seed, std::size_t n, std::array<std::size_t, 3> sizes);
IpufInstance make_ipuf(std::uint64_t seed, std::size_t n, std::size_t x, std::size_t y,
                       std::size_t interpose_pos);

std::uint8_t ff_respond(const FfApufInstance& inst, const Challenge& c, const NoiseModel& noise,
                        Rng& rng);
std::uint8_t xor_ff_respond(const XorFfInstance& inst, const Challenge& c,
                            const NoiseModel& noise, Rng& rng);
std::uint8_t oax_ff_respond(const OaxFfInstance& inst, const Challenge& c,
                            const NoiseModel& noise, Rng& rng);
std::uint8_t mn_respond(const MnApufInstance& inst, const Challenge& c, const NoiseModel& noise,
                        Rng& rng);
std::uint8_t ipuf_respond(const IpufInstance& inst, const Challenge& c, const NoiseModel& noise,
                          Rng& rng);

// c' = c[1..i-1] ++ bit ++ c[i..n] with i 1-based.
Challenge interpose(const Challenge& c, std::size_t pos, std::uint8_t bit);

using PufInstance = std::variant<ApufInstance, FfApufInstance, XorFfInstance, OaxFfInstance,
                                 MnApufInstance, IpufInstance>;

std::uint8_t respond(const PufInstance& inst, const Challenge& c, const NoiseModel& noise,
                     Rng& rng);
std::size_t challenge_size(const PufInstance& inst);

}  // namespace copuf
