#include "copuf/dataset.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <zlib.h>

#include "copuf/errors.hpp"
#include "copuf/parallel.hpp"
#include "copuf/sampling.hpp"

namespace copuf {

namespace {

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes, std::uint32_t crc = 0) {
  // zlib takes uInt lengths; feed large buffers in pieces.
  uLong value = crc;
  const std::uint8_t* p = bytes.data();
  std::size_t left = bytes.size();
  while (left > 0) {
    const auto piece = static_cast<uInt>(std::min<std::size_t>(left, 1u << 30));
    value = ::crc32(value, p, piece);
    p += piece;
    left -= piece;
  }
  return static_cast<std::uint32_t>(value);
}

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  std::uint64_t raw;
  if constexpr (std::is_floating_point_v<T>) {
    raw = std::bit_cast<std::uint64_t>(value);
  } else {
    raw = static_cast<std::uint64_t>(value);
  }
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(raw >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* p) {
  std::uint64_t raw = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) raw |= std::uint64_t{p[i]} << (8 * i);
  if constexpr (std::is_floating_point_v<T>) {
    return std::bit_cast<T>(raw);
  } else {
    return static_cast<T>(raw);
  }
}

void pack_into(std::span<const std::uint8_t> bits, std::uint8_t* dst, std::size_t bytes) {
  std::memset(dst, 0, bytes);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) dst[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
}

}  // namespace

CrpSet::CrpSet(CrpHeader header) : header_(std::move(header)) {
  if (header_.n == 0) throw ConfigError("CRP set needs n >= 1");
}

void CrpSet::reserve(std::size_t count) {
  packed_.reserve(count * challenge_bytes());
  responses_.reserve(count);
}

void CrpSet::resize(std::size_t count) {
  packed_.resize(count * challenge_bytes());
  responses_.resize(count);
}

void CrpSet::push_back(const Challenge& c, std::uint8_t response) {
  resize(size() + 1);
  set(size() - 1, c, response);
}

void CrpSet::set(std::size_t i, const Challenge& c, std::uint8_t response) {
  if (c.size() != n()) {
    throw ConfigError("challenge length " + std::to_string(c.size()) + " does not match n=" +
                      std::to_string(n()));
  }
  pack_into(c.bits(), packed_.data() + i * challenge_bytes(), challenge_bytes());
  responses_[i] = response ? 1 : 0;
}

void CrpSet::unpack(std::size_t i, std::span<std::uint8_t> bits) const {
  const std::uint8_t* src = packed_.data() + i * challenge_bytes();
  for (std::size_t j = 0; j < n(); ++j) bits[j] = (src[j / 8] >> (j % 8)) & 1u;
}

Challenge CrpSet::challenge(std::size_t i) const {
  std::vector<std::uint8_t> bits(n());
  unpack(i, bits);
  return Challenge(std::move(bits));
}

CrpSet CrpSet::slice(std::size_t begin, std::size_t count) const {
  if (begin + count > size()) throw ConfigError("slice exceeds CRP set size");
  CrpSet out(header_);
  const std::size_t cb = challenge_bytes();
  out.packed_.assign(packed_.begin() + static_cast<std::ptrdiff_t>(begin * cb),
                     packed_.begin() + static_cast<std::ptrdiff_t>((begin + count) * cb));
  out.responses_.assign(responses_.begin() + static_cast<std::ptrdiff_t>(begin),
                        responses_.begin() + static_cast<std::ptrdiff_t>(begin + count));
  return out;
}

std::uint32_t CrpSet::fingerprint() const {
  std::uint32_t crc = 0;
  const std::size_t cb = challenge_bytes();
  for (std::size_t i = 0; i < size(); ++i) {
    crc = crc32_of({packed_.data() + i * cb, cb}, crc);
    crc = crc32_of({&responses_[i], 1}, crc);
  }
  return crc;
}

CrpSet generate_crps(const PufInstance& inst, std::size_t count, const NoiseModel& noise,
                     std::uint64_t seed, unsigned threads) {
  const std::size_t n = challenge_size(inst);
  CrpHeader header;
  header.n = static_cast<std::uint16_t>(n);
  header.sigma = noise.sigma;
  CrpSet set(header);
  set.resize(count);
  parallel_for(chunk_count(count), threads, [&](std::size_t chunk) {
    Rng challenge_rng = challenge_stream(seed, chunk);
    Rng noise_rng = noise_stream(seed, chunk);
    const std::size_t begin = chunk * kChunkSize;
    const std::size_t end = std::min(count, begin + kChunkSize);
    for (std::size_t i = begin; i < end; ++i) {
      const Challenge c = Challenge::random(n, challenge_rng);
      // Disjoint records per chunk, so concurrent set() calls never overlap.
      set.set(i, c, respond(inst, c, noise, noise_rng));
    }
  });
  return set;
}

CrpSplit split(const CrpSet& set, std::size_t train_n, std::size_t val_n, std::size_t test_n) {
  if (train_n + val_n + test_n > set.size()) {
    throw ConfigError("split needs " + std::to_string(train_n + val_n + test_n) +
                      " records but the set has " + std::to_string(set.size()));
  }
  return {set.slice(0, train_n), set.slice(train_n, val_n), set.slice(train_n + val_n, test_n)};
}

std::vector<std::uint8_t> serialize_header(const CrpHeader& header, std::uint64_t count) {
  std::vector<std::uint8_t> out(std::begin(kCrpMagic), std::end(kCrpMagic));
  put_le(out, header.version);
  put_le(out, header.n);
  put_le(out, header.k);
  put_le(out, header.instance_seed);
  put_le(out, header.sigma);
  put_le(out, count);
  put_le(out, crc32_of(out));
  return out;
}

void write_crps(const CrpSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  const auto header = serialize_header(set.header(), set.size());
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
  const std::size_t cb = set.challenge_bytes();
  std::vector<std::uint8_t> buffer;
  buffer.reserve(kChunkSize * set.record_size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto bytes = set.packed().subspan(i * cb, cb);
    buffer.insert(buffer.end(), bytes.begin(), bytes.end());
    buffer.push_back(set.response(i));
    if (buffer.size() >= kChunkSize * set.record_size() || i + 1 == set.size()) {
      out.write(reinterpret_cast<const char*>(buffer.data()), static_cast<std::streamsize>(buffer.size()));
      buffer.clear();
    }
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

CrpSet read_crps(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < sizeof(kCrpMagic) ||
      std::memcmp(bytes.data(), kCrpMagic, sizeof(kCrpMagic)) != 0) {
    throw FormatError(FormatError::Reason::kVersionMismatch,
                      "'" + path.string() + "' is not a CRP file (bad magic)");
  }
  if (bytes.size() < 10) throw FormatError(FormatError::Reason::kTruncated, "header truncated");
  const auto version = get_le<std::uint16_t>(bytes.data() + 8);
  if (version != kCrpFormatVersion) {
    throw FormatError(FormatError::Reason::kVersionMismatch,
                      "unsupported CRP format version " + std::to_string(version));
  }
  if (bytes.size() < kCrpHeaderSize) {
    throw FormatError(FormatError::Reason::kTruncated, "header truncated");
  }
  const auto stored_crc = get_le<std::uint32_t>(bytes.data() + 38);
  if (crc32_of({bytes.data(), 38}) != stored_crc) {
    throw FormatError(FormatError::Reason::kChecksum, "header checksum mismatch");
  }
  CrpHeader header;
  header.version = version;
  header.n = get_le<std::uint16_t>(bytes.data() + 10);
  header.k = get_le<std::uint16_t>(bytes.data() + 12);
  header.instance_seed = get_le<std::uint64_t>(bytes.data() + 14);
  header.sigma = get_le<double>(bytes.data() + 22);
  const auto count = get_le<std::uint64_t>(bytes.data() + 30);
  if (header.n == 0) throw FormatError(FormatError::Reason::kVersionMismatch, "header has n = 0");
  CrpSet set(header);
  const std::size_t cb = set.challenge_bytes();
  const std::size_t body = bytes.size() - kCrpHeaderSize;
  if (count > body / set.record_size() || body != count * set.record_size()) {
    throw FormatError(FormatError::Reason::kTruncated,
                      "expected " + std::to_string(count) + " records of " +
                          std::to_string(set.record_size()) + " bytes, found " +
                          std::to_string(body) + " bytes");
  }
  set.resize(count);
  std::vector<std::uint8_t> bits(header.n);
  const std::uint8_t* p = bytes.data() + kCrpHeaderSize;
  for (std::size_t i = 0; i < count; ++i, p += set.record_size()) {
    for (std::size_t j = 0; j < header.n; ++j) bits[j] = (p[j / 8] >> (j % 8)) & 1u;
    set.set(i, Challenge(bits), p[cb]);
  }
  return set;
}

void write_crps_csv(const CrpSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "challenge,response\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    out << set.challenge(i).to_string() << ',' << int{set.response(i)} << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace copuf
