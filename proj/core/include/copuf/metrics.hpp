#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include <nlohmann/json.hpp>

#include "copuf/composite.hpp"
#include "copuf/parallel.hpp"

namespace copuf {

// Reference response that noisy repeats are compared against.
enum class Reference {
  kGolden,    // noise-free evaluation
  kMajority,  // majority vote of the noisy repeats themselves
};

std::string_view to_string(Reference ref);
Reference parse_reference(std::string_view text);

struct BerOptions {
  std::size_t challenges = 10000;
  std::size_t repeats = 11;
  NoiseModel noise;
  std::uint64_t seed = 0;
  Reference reference = Reference::kGolden;
  unsigned threads = 1;
};

struct MetricsReport {
  double ber = 0.0;
  double uniformity = 0.0;
  std::size_t challenges_used = 0;
  std::size_t repeats = 0;
  double sigma_noise = 0.0;  // nominal
  double calibration = 0.0;
  std::uint64_t seed = 0;
  Reference reference = Reference::kGolden;
};

// BER = (# noisy responses != reference) / (challenges * repeats).
double measure_ber(const PufInstance& inst, const BerOptions& opts);

// Fraction of 1-responses over uniformly random challenges, noise-free.
double measure_uniformity(const PufInstance& inst, std::size_t challenges, std::uint64_t seed,
                          unsigned threads = 1);

// Both metrics over the same challenge set, with calibrated_noise(nominal_sigma).
MetricsReport measure_metrics(const PufInstance& inst, double nominal_sigma, std::uint64_t seed,
                              std::size_t challenges = 10000, std::size_t repeats = 11,
                              Reference reference = Reference::kGolden, unsigned threads = 1);

nlohmann::json to_json(const MetricsReport& report);

}  // namespace copuf
