#pragma once

#include <cstdint>
#include <random>

namespace copuf {

/// Seeded random stream used everywhere randomness enters the simulator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The uniform and Gaussian transforms are implemented here instead
/// of using <random> distributions, because the standard leaves their
/// algorithms to the library vendor:
///   uniform():  top 53 bits of one engine word, scaled to [0, 1)
///   gaussian(): Box-Muller on two uniforms, both outputs used in turn
///   bit():      one engine word per 64 bits, consumed LSB first
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double gaussian();
  double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }
  std::uint8_t bit();
  // Uniform integer in [0, bound); rejection sampling, bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
  std::uint64_t bit_word_ = 0;
  int bits_left_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent sub-stream seed. Used for per-member weights,
// per-chunk challenge/noise streams and per-epoch shuffles, so results never
// depend on how work is scheduled.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0);

// Domain tags for mix_seed.
namespace stream {
inline constexpr std::uint64_t kMember = 0x6d656d62;         // "memb"
inline constexpr std::uint64_t kArbiterBias = 0x61726269;    // "arbi"
inline constexpr std::uint64_t kChallenge = 0x6368616c;      // "chal"
inline constexpr std::uint64_t kNoise = 0x6e6f6973;          // "nois"
inline constexpr std::uint64_t kShuffle = 0x73687566;        // "shuf"
inline constexpr std::uint64_t kInit = 0x696e6974;           // "init"
}  // namespace stream

}  // namespace copuf
