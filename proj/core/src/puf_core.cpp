#include "copuf/puf_core.hpp"

#include <cmath>
#include <string>

#include "copuf/errors.hpp"

namespace copuf {

Challenge::Challenge(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw ConfigError("challenge must have at least one bit");
  for (auto b : bits_) {
    if (b > 1) throw ConfigError("challenge bits must be 0 or 1");
  }
}

Challenge Challenge::zeros(std::size_t n) {
  return Challenge(std::vector<std::uint8_t>(n, 0));
}

Challenge Challenge::random(std::size_t n, Rng& rng) {
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = rng.bit();
  return Challenge(std::move(bits));
}

Challenge Challenge::parse(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') {
      throw ConfigError("challenge string may only contain '0' and '1'");
    }
    bits.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return Challenge(std::move(bits));
}

void Challenge::set(std::size_t i, std::uint8_t bit) {
  if (bit > 1) throw ConfigError("challenge bits must be 0 or 1");
  bits_.at(i) = bit;
}

std::string Challenge::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
  return s;
}

NoiseModel calibrated_noise(double nominal_sigma) {
  if (!(nominal_sigma >= 0.0)) throw ConfigError("noise sigma must be >= 0");
  return NoiseModel{nominal_sigma, kNoiseCalibration};
}

WeightVector derive_weights(std::uint64_t seed, std::size_t n, double mu, double sigma) {
  if (n == 0) throw ConfigError("stage count must be positive");
  if (!(sigma > 0.0)) throw ConfigError("weight sigma must be positive");
  Rng rng(seed);
  WeightVector w(n + 1);
  for (auto& v : w) v = rng.gaussian(mu, sigma);
  return w;
}

void parity_transform(std::span<const std::uint8_t> bits, std::span<double> out) {
  const std::size_t n = bits.size();
  out[n] = 1.0;
  for (std::size_t i = n; i-- > 0;) {
    out[i] = bits[i] ? -out[i + 1] : out[i + 1];
  }
}

ParityVector parity_transform(const Challenge& c) {
  ParityVector phi(c.size() + 1);
  parity_transform(c.bits(), phi);
  return phi;
}

double evaluate_delay(std::span<const double> w, std::span<const double> phi,
                      const NoiseModel& noise, Rng& rng) {
  if (w.size() != phi.size()) {
    throw ConfigError("weight/parity length mismatch: " + std::to_string(w.size()) + " vs " +
                      std::to_string(phi.size()));
  }
  double delta = 0.0;
  if (noise.noise_free()) {
    for (std::size_t i = 0; i < w.size(); ++i) delta += w[i] * phi[i];
  } else {
    const double sd = noise.stddev();
    for (std::size_t i = 0; i < w.size(); ++i) delta += (w[i] + sd * rng.gaussian()) * phi[i];
  }
  return delta;
}

ApufInstance ApufInstance::create(std::uint64_t seed, std::size_t n) {
  return ApufInstance{n, derive_weights(seed, n), seed};
}

std::uint8_t apuf_respond(const ApufInstance& inst, std::span<const std::uint8_t> bits,
                          const NoiseModel& noise, Rng& rng) {
  if (bits.size() != inst.n) {
    throw ConfigError("challenge has " + std::to_string(bits.size()) + " bits, instance has " +
                      std::to_string(inst.n) + " stages");
  }
  // Small fixed buffer for the common sizes; falls back to the heap.
  double stack_phi[257];
  std::vector<double> heap_phi;
  std::span<double> phi;
  if (inst.n + 1 <= std::size(stack_phi)) {
    phi = std::span<double>(stack_phi, inst.n + 1);
  } else {
    heap_phi.resize(inst.n + 1);
    phi = heap_phi;
  }
  parity_transform(bits, phi);
  return arbitrate(evaluate_delay(inst.weights, phi, noise, rng));
}

std::uint8_t apuf_respond(const ApufInstance& inst, const Challenge& c, const NoiseModel& noise,
                          Rng& rng) {
  return apuf_respond(inst, c.bits(), noise, rng);
}

}  // namespace copuf
