#pragma once

#include <cstddef>
#include <cstdint>

#include "copuf/rng.hpp"

namespace copuf {

// Challenge sets are generated in fixed-size chunks, each with its own
// challenge stream and noise stream derived from (seed, chunk index). The
// i-th challenge of a set therefore depends only on (seed, n, i), and
// results are identical for every thread count.
inline constexpr std::size_t kChunkSize = 1024;

inline std::size_t chunk_count(std::size_t count) {
  return (count + kChunkSize - 1) / kChunkSize;
}

inline Rng challenge_stream(std::uint64_t seed, std::size_t chunk) {
  return Rng(mix_seed(seed, stream::kChallenge, chunk));
}

inline Rng noise_stream(std::uint64_t seed, std::size_t chunk) {
  return Rng(mix_seed(seed, stream::kNoise, chunk));
}

}  // namespace copuf
