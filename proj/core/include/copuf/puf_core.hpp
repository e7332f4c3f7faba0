#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "copuf/rng.hpp"

namespace copuf {

/// An n-bit challenge. Bits are 0/1; index 0 is the first stage
/// (1-based position 1 in configuration files).
class Challenge {
 public:
  Challenge() = default;
  explicit Challenge(std::vector<std::uint8_t> bits);
  static Challenge zeros(std::size_t n);
  static Challenge random(std::size_t n, Rng& rng);
  // "0110..." with the first character as bit index 0.
  static Challenge parse(std::string_view text);

  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, std::uint8_t bit);
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::string to_string() const;

  friend bool operator==(const Challenge&, const Challenge&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// phi has n+1 entries in {-1,+1}; phi[n] is the constant term.
using ParityVector = std::vector<double>;
using WeightVector = std::vector<double>;

/// Evaluation-time noise: every weight entry receives an independent
/// N(0, (scale * sigma)^2) perturbation per evaluation. sigma is the nominal
/// level reported to the user; scale is the calibration applied on top of it.
/// A zero level is the golden, noise-free evaluation and consumes no
/// randomness.
struct NoiseModel {
  double sigma = 0.0;
  double scale = 1.0;

  double stddev() const noexcept { return sigma * scale; }
  bool noise_free() const noexcept { return stddev() == 0.0; }
  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

// One constant for every architecture. It places the plain 64-stage APUF's
// BER at nominal sigma 0.05 inside the 5.5%..8.5% band seen on silicon-
// calibrated simulations.
inline constexpr double kNoiseCalibration = 4.6;

// {nominal_sigma, kNoiseCalibration}
NoiseModel calibrated_noise(double nominal_sigma);

WeightVector derive_weights(std::uint64_t seed, std::size_t n, double mu = 0.0,
                            double sigma = 1.0);

ParityVector parity_transform(const Challenge& c);
// Writes the n+1 parity entries of `bits` into `out` (size n+1).
void parity_transform(std::span<const std::uint8_t> bits, std::span<double> out);

// (w + eta) . phi with a fresh eta per call.
double evaluate_delay(std::span<const double> w, std::span<const double> phi,
                      const NoiseModel& noise, Rng& rng);

inline std::uint8_t arbitrate(double delta) noexcept { return delta < 0.0 ? 1 : 0; }

struct ApufInstance {
  std::size_t n = 0;
  WeightVector weights;
  std::uint64_t seed = 0;

  static ApufInstance create(std::uint64_t seed, std::size_t n);
};

std::uint8_t apuf_respond(const ApufInstance& inst, const Challenge& c,
                          const NoiseModel& noise, Rng& rng);
std::uint8_t apuf_respond(const ApufInstance& inst, std::span<const std::uint8_t> bits,
                          const NoiseModel& noise, Rng& rng);

}  // namespace copuf
