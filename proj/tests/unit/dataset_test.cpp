#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <unistd.h>

#include "copuf/dataset.hpp"
#include "copuf/descriptor.hpp"
#include "copuf/errors.hpp"

namespace {

using namespace copuf;
namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("copuf-test-" + std::to_string(::getpid()) + "-" +
                                                  std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
}

PufInstance loop_b(std::uint64_t seed = 7) {
  return FfApufInstance::create(seed, 64, resolve_loop_layout("Loop_B"));
}

TEST(CrpSet, PackUnpack) {
  CrpSet set(CrpHeader{kCrpFormatVersion, 13, 0, 0, 0.0, ""});
  Rng rng(1);
  std::vector<Challenge> cs;
  for (int i = 0; i < 50; ++i) {
    cs.push_back(Challenge::random(13, rng));
    set.push_back(cs.back(), static_cast<std::uint8_t>(i % 2));
  }
  EXPECT_EQ(set.record_size(), 3u);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    EXPECT_EQ(set.challenge(i), cs[i]);
    EXPECT_EQ(set.response(i), i % 2);
  }
  CrpSet one(CrpHeader{kCrpFormatVersion, 9, 0, 0, 0.0, ""});
  one.push_back(Challenge::parse("100000001"), 1);
  EXPECT_EQ(one.packed()[0], 0x01);
  EXPECT_EQ(one.packed()[1], 0x01);
  EXPECT_THROW(one.push_back(Challenge::zeros(8), 0), ConfigError);
}

TEST(Generate, Deterministic) {
  const auto a = generate_crps(loop_b(), 1000, NoiseModel{}, 3);
  const auto b = generate_crps(loop_b(), 1000, NoiseModel{}, 3);
  const auto c = generate_crps(loop_b(), 1000, NoiseModel{}, 4);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.fingerprint(), c.fingerprint());
}

TEST(Generate, ThreadCountIndependent) {
  const auto noise = calibrated_noise(0.05);
  const auto a = generate_crps(loop_b(), 5000, noise, 5, 1);
  const auto b = generate_crps(loop_b(), 5000, noise, 5, 4);
  EXPECT_EQ(a, b);
}

TEST(Generate, PrefixStable) {
  const auto small = generate_crps(loop_b(), 1500, NoiseModel{}, 6);
  const auto large = generate_crps(loop_b(), 4000, NoiseModel{}, 6);
  EXPECT_EQ(large.slice(0, 1500), small);
}

TEST(Generate, ResponsesMatchReevaluation) {
  const auto inst = loop_b();
  const auto set = generate_crps(inst, 2000, NoiseModel{}, 8);
  Rng rng(0);
  for (std::size_t i = 0; i < set.size(); ++i)
    ASSERT_EQ(respond(inst, set.challenge(i), NoiseModel{}, rng), set.response(i));
}

TEST(Generate, ChallengeMarginals) {
  const auto set = generate_crps(ApufInstance::create(1, 64), 100000, NoiseModel{}, 9);
  std::vector<std::size_t> ones(64, 0);
  std::vector<std::uint8_t> bits(64);
  for (std::size_t i = 0; i < set.size(); ++i) {
    set.unpack(i, bits);
    for (std::size_t j = 0; j < 64; ++j) ones[j] += bits[j];
  }
  for (std::size_t j = 0; j < 64; ++j) EXPECT_NEAR(ones[j] / 100000.0, 0.5, 0.01) << j;
}

TEST(Generate, HeaderSigma) {
  const auto set = generate_crps(loop_b(), 10, calibrated_noise(0.02), 1);
  EXPECT_EQ(set.header().sigma, 0.02);
  EXPECT_EQ(set.n(), 64u);
}

TEST(Split, ContiguousSlices) {
  const auto set = generate_crps(loop_b(), 26000, NoiseModel{}, 10);
  const auto s = split(set, 20000, 5000, 1000);
  EXPECT_EQ(s.train.size(), 20000u);
  EXPECT_EQ(s.validation.size(), 5000u);
  EXPECT_EQ(s.test.size(), 1000u);
  EXPECT_EQ(s.validation.challenge(0), set.challenge(20000));
  EXPECT_EQ(s.test.challenge(999), set.challenge(25999));
}

TEST(Split, EdgeCases) {
  const auto set = generate_crps(loop_b(), 100, NoiseModel{}, 11);
  const auto all = split(set, 100, 0, 0);
  EXPECT_EQ(all.train, set);
  EXPECT_TRUE(all.validation.empty());
  EXPECT_TRUE(all.test.empty());
  EXPECT_THROW(split(set, 90, 10, 1), ConfigError);
}

TEST(File, RoundTripAndSize) {
  TempDir dir;
  auto set = generate_crps(loop_b(), 10000, calibrated_noise(0.05), 12);
  set.header().k = 2;
  set.header().instance_seed = 7;
  write_crps(set, dir / "a.crp");
  EXPECT_EQ(fs::file_size(dir / "a.crp"), 42u + 10000u * (8u + 1u));
  const auto back = read_crps(dir / "a.crp");
  EXPECT_EQ(back.header().k, 2);
  EXPECT_EQ(back.header().instance_seed, 7u);
  EXPECT_EQ(back.header().sigma, 0.05);
  EXPECT_EQ(back.packed().size(), set.packed().size());
  EXPECT_TRUE(std::equal(back.packed().begin(), back.packed().end(), set.packed().begin()));
  EXPECT_TRUE(std::equal(back.responses().begin(), back.responses().end(), set.responses().begin()));
  write_crps(back, dir / "b.crp");
  EXPECT_EQ(slurp(dir / "a.crp"), slurp(dir / "b.crp"));
}

TEST(File, OddWidthSize) {
  TempDir dir;
  const auto set = generate_crps(ApufInstance::create(1, 13), 77, NoiseModel{}, 1);
  write_crps(set, dir / "x.crp");
  EXPECT_EQ(fs::file_size(dir / "x.crp"), 42u + 77u * 3u);
  EXPECT_EQ(read_crps(dir / "x.crp").slice(0, 77).fingerprint(), set.fingerprint());
}

FormatError::Reason read_failure(const fs::path& p) {
  try {
    read_crps(p);
  } catch (const FormatError& e) {
    return e.reason();
  }
  ADD_FAILURE() << "read succeeded";
  return FormatError::Reason::kChecksum;
}

TEST(File, Corruption) {
  TempDir dir;
  write_crps(generate_crps(loop_b(), 100, NoiseModel{}, 13), dir / "ok.crp");
  const auto bytes = slurp(dir / "ok.crp");

  auto magic = bytes;
  magic[0] = 'X';
  spit(dir / "magic.crp", magic);
  EXPECT_EQ(read_failure(dir / "magic.crp"), FormatError::Reason::kVersionMismatch);

  auto version = bytes;
  version[8] = 9;
  spit(dir / "version.crp", version);
  EXPECT_EQ(read_failure(dir / "version.crp"), FormatError::Reason::kVersionMismatch);

  auto seed = bytes;
  seed[15] ^= 0x40;
  spit(dir / "crc.crp", seed);
  EXPECT_EQ(read_failure(dir / "crc.crp"), FormatError::Reason::kChecksum);

  spit(dir / "short.crp", bytes.substr(0, bytes.size() - 4));
  EXPECT_EQ(read_failure(dir / "short.crp"), FormatError::Reason::kTruncated);
  spit(dir / "header.crp", bytes.substr(0, 20));
  EXPECT_EQ(read_failure(dir / "header.crp"), FormatError::Reason::kTruncated);

  EXPECT_THROW(read_crps(dir / "missing.crp"), IoError);
}

TEST(File, Csv) {
  TempDir dir;
  const auto set = generate_crps(loop_b(), 250, NoiseModel{}, 14);
  write_crps_csv(set, dir / "a.csv");
  std::ifstream in(dir / "a.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "challenge,response");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (rows == 0) EXPECT_EQ(line, set.challenge(0).to_string() + "," + std::to_string(set.response(0)));
    ++rows;
  }
  EXPECT_EQ(rows, 250u);
}

TEST(Header, Serialization) {
  const auto h = serialize_header(CrpHeader{kCrpFormatVersion, 64, 2, 0x0102030405060708ULL, 0.05, ""}, 3);
  ASSERT_EQ(h.size(), kCrpHeaderSize);
  EXPECT_EQ(std::string(h.begin(), h.begin() + 8), "COPUFCRP");
  EXPECT_EQ(h[8], 1);
  EXPECT_EQ(h[10], 64);
  EXPECT_EQ(h[12], 2);
  EXPECT_EQ(h[14], 0x08);
  EXPECT_EQ(h[21], 0x01);
  EXPECT_EQ(h[30], 3);
}

}  // namespace
