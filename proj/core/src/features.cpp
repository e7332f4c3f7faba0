#include "copuf/features.hpp"

#include <string>

#include "copuf/composite.hpp"
#include "copuf/descriptor.hpp"
#include "copuf/errors.hpp"

namespace copuf {
namespace {

// Parity entries of one sub-challenge, constant dropped, written to out.
void block_parity(std::span<const std::uint8_t> bits, std::span<double> out) {
  double running = 1.0;
  for (std::size_t i = bits.size(); i-- > 0;) {
    if (bits[i]) running = -running;
    out[i] = running;
  }
}

void check_ends(std::span<const std::size_t> ends, std::size_t n) {
  std::size_t prev = 0;
  for (auto e : ends) {
    if (e < 1 || e > n) {
      throw ConfigError("end position " + std::to_string(e) + " outside 1.." + std::to_string(n));
    }
    if (e <= prev) throw ConfigError("end positions must be strictly increasing and unique");
    prev = e;
  }
}

void apply_ff(std::span<const std::uint8_t> bits, std::span<const std::size_t> ends,
              std::span<double> out) {
  std::size_t begin = 0;  // 0-based start of the current block
  std::size_t written = 0;
  auto emit = [&](std::size_t end_exclusive) {
    const std::size_t len = end_exclusive - begin;
    block_parity(bits.subspan(begin, len), out.subspan(written, len));
    written += len;
  };
  for (auto e : ends) {
    emit(e - 1);  // bits before the end position
    begin = e;    // skip the overwritten bit
  }
  emit(bits.size());
}

}  // namespace

FeatureRow plain_features(const Challenge& c) {
  FeatureRow row(c.size());
  block_parity(c.bits(), row);
  return row;
}

FeatureRow ff_features(const Challenge& c, std::span<const std::size_t> end_positions) {
  check_ends(end_positions, c.size());
  FeatureRow row(c.size() - end_positions.size());
  apply_ff(c.bits(), end_positions, row);
  return row;
}

FeatureMap FeatureMap::feed_forward(std::vector<std::size_t> end_positions) {
  std::size_t prev = 0;
  for (auto e : end_positions) {
    if (e <= prev) throw ConfigError("end positions must be strictly increasing and unique");
    prev = e;
  }
  return FeatureMap(std::move(end_positions));
}

FeatureMap FeatureMap::for_instance(const InstanceDescriptor& desc) {
  switch (desc.arch) {
    case Architecture::kFf:
    case Architecture::kXorFf:
    case Architecture::kOaxFf:
      return feed_forward(sorted_end_positions(desc.loops));
    default:
      return plain();
  }
}

void FeatureMap::apply(std::span<const std::uint8_t> bits, std::span<double> out) const {
  if (out.size() != dim(bits.size())) throw ConfigError("feature buffer has the wrong size");
  if (ends_.empty()) {
    block_parity(bits, out);
  } else {
    check_ends(ends_, bits.size());
    apply_ff(bits, ends_, out);
  }
}

FeatureRow FeatureMap::operator()(const Challenge& c) const {
  FeatureRow row(dim(c.size()));
  apply(c.bits(), row);
  return row;
}

}  // namespace copuf
