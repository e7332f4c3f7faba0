#include "copuf/metrics.hpp"

#include <numeric>
#include <vector>

#include "copuf/errors.hpp"
#include "copuf/sampling.hpp"

namespace copuf {

std::string_view to_string(Reference ref) {
  return ref == Reference::kGolden ? "golden" : "majority";
}

Reference parse_reference(std::string_view text) {
  if (text == "golden") return Reference::kGolden;
  if (text == "majority") return Reference::kMajority;
  throw ConfigError("unknown reference mode '" + std::string(text) + "'; use golden or majority");
}

double measure_ber(const PufInstance& inst, const BerOptions& opts) {
  if (opts.repeats < 1) throw ConfigError("repeats must be >= 1");
  if (opts.challenges < 1) throw ConfigError("challenge count must be >= 1");
  const std::size_t n = challenge_size(inst);
  const std::size_t chunks = chunk_count(opts.challenges);
  std::vector<std::uint64_t> errors(chunks, 0);
  parallel_for(chunks, opts.threads, [&](std::size_t chunk) {
    Rng challenge_rng = challenge_stream(opts.seed, chunk);
    Rng noise_rng = noise_stream(opts.seed, chunk);
    Rng unused(0);
    const std::size_t begin = chunk * kChunkSize;
    const std::size_t end = std::min(opts.challenges, begin + kChunkSize);
    std::vector<std::uint8_t> noisy(opts.repeats);
    std::uint64_t count = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const Challenge c = Challenge::random(n, challenge_rng);
      for (auto& r : noisy) r = respond(inst, c, opts.noise, noise_rng);
      std::uint8_t reference;
      if (opts.reference == Reference::kGolden) {
        reference = respond(inst, c, NoiseModel{}, unused);
      } else {
        const auto ones = std::accumulate(noisy.begin(), noisy.end(), std::size_t{0});
        // Ties (even repeat counts) resolve to 1.
        reference = 2 * ones >= noisy.size() ? 1 : 0;
      }
      for (auto r : noisy) count += (r != reference);
    }
    errors[chunk] = count;
  });
  const auto total = std::accumulate(errors.begin(), errors.end(), std::uint64_t{0});
  return static_cast<double>(total) / static_cast<double>(opts.challenges * opts.repeats);
}

double measure_uniformity(const PufInstance& inst, std::size_t challenges, std::uint64_t seed,
                          unsigned threads) {
  if (challenges < 1) throw ConfigError("challenge count must be >= 1");
  const std::size_t n = challenge_size(inst);
  const std::size_t chunks = chunk_count(challenges);
  std::vector<std::uint64_t> ones(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t chunk) {
    Rng challenge_rng = challenge_stream(seed, chunk);
    Rng unused(0);
    const std::size_t begin = chunk * kChunkSize;
    const std::size_t end = std::min(challenges, begin + kChunkSize);
    std::uint64_t count = 0;
    for (std::size_t i = begin; i < end; ++i) {
      count += respond(inst, Challenge::random(n, challenge_rng), NoiseModel{}, unused);
    }
    ones[chunk] = count;
  });
  const auto total = std::accumulate(ones.begin(), ones.end(), std::uint64_t{0});
  return static_cast<double>(total) / static_cast<double>(challenges);
}

MetricsReport measure_metrics(const PufInstance& inst, double nominal_sigma, std::uint64_t seed,
                              std::size_t challenges, std::size_t repeats, Reference reference,
                              unsigned threads) {
  MetricsReport report;
  BerOptions opts;
  opts.challenges = challenges;
  opts.repeats = repeats;
  opts.noise = calibrated_noise(nominal_sigma);
  opts.seed = seed;
  opts.reference = reference;
  opts.threads = threads;
  report.ber = measure_ber(inst, opts);
  report.uniformity = measure_uniformity(inst, challenges, seed, threads);
  report.challenges_used = challenges;
  report.repeats = repeats;
  report.sigma_noise = nominal_sigma;
  report.calibration = opts.noise.scale;
  report.seed = seed;
  report.reference = reference;
  return report;
}

nlohmann::json to_json(const MetricsReport& r) {
  return {
      {"ber", r.ber},
      {"reliability", 1.0 - r.ber},
      {"uniformity", r.uniformity},
      {"challenges_used", r.challenges_used},
      {"repeats", r.repeats},
      {"sigma_noise", r.sigma_noise},
      {"noise_calibration", r.calibration},
      {"seed", r.seed},
      {"reference", to_string(r.reference)},
  };
}

}  // namespace copuf
