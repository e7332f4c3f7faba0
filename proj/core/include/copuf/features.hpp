#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "copuf/puf_core.hpp"

namespace copuf {

struct InstanceDescriptor;

using FeatureRow = std::vector<double>;

// phi[0..n-1] of the parity transform; the constant entry is dropped.
FeatureRow plain_features(const Challenge& c);

// Splits c at the (1-based, strictly increasing) end positions, drops the
// end bits themselves, and concatenates the parity transform of each
// sub-challenge without its constant. Result has n - k entries.
FeatureRow ff_features(const Challenge& c, std::span<const std::size_t> end_positions);

/// The attacker's challenge-to-feature transform.
class FeatureMap {
 public:
  static FeatureMap plain() { return FeatureMap({}); }
  static FeatureMap feed_forward(std::vector<std::size_t> end_positions);
  // FF-based architectures use the member loop geometry; APUF, Mn and iPUF
  // attackers see the raw challenge.
  static FeatureMap for_instance(const InstanceDescriptor& desc);

  bool is_plain() const noexcept { return ends_.empty(); }
  const std::vector<std::size_t>& end_positions() const noexcept { return ends_; }
  std::size_t dim(std::size_t n) const noexcept { return n - ends_.size(); }

  // out.size() == dim(bits.size())
  void apply(std::span<const std::uint8_t> bits, std::span<double> out) const;
  FeatureRow operator()(const Challenge& c) const;

 private:
  explicit FeatureMap(std::vector<std::size_t> ends) : ends_(std::move(ends)) {}
  std::vector<std::size_t> ends_;
};

}  // namespace copuf
