#include <gtest/gtest.h>

#include <algorithm>

#include "copuf/descriptor.hpp"
#include "copuf/errors.hpp"
#include "copuf/features.hpp"
#include "oracles.hpp"

namespace {

using namespace copuf;

TEST(PlainFeatures, Examples) {
  EXPECT_EQ(plain_features(Challenge::zeros(64)), FeatureRow(64, 1.0));
  EXPECT_EQ(plain_features(Challenge::parse("011")), (FeatureRow{1, 1, -1}));
}

TEST(FfFeatures, NoEndsIsPlain) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto c = Challenge::random(64, rng);
    ASSERT_EQ(ff_features(c, {}), plain_features(c));
  }
}

TEST(FfFeatures, ToySplit) {
  // ends {3}: [c1,c2] and [c4,c5,c6]
  const auto c = Challenge::parse("101011");
  const std::vector<std::size_t> ends{3};
  const auto row = ff_features(c, ends);
  ASSERT_EQ(row.size(), 5u);
  const auto a = oracle::parity({1, 0});
  const auto b = oracle::parity({0, 1, 1});
  EXPECT_EQ(row, (FeatureRow{a[0], a[1], b[0], b[1], b[2]}));
}

TEST(FfFeatures, LoopCDimension) {
  const auto ends = sorted_end_positions(resolve_loop_layout("Loop_C"));
  EXPECT_EQ(ff_features(Challenge::zeros(64), ends).size(), 61u);
}

TEST(FfFeatures, Rejects) {
  const auto c = Challenge::zeros(8);
  EXPECT_THROW(ff_features(c, std::vector<std::size_t>{3, 3}), ConfigError);
  EXPECT_THROW(ff_features(c, std::vector<std::size_t>{9}), ConfigError);
  EXPECT_THROW(ff_features(c, std::vector<std::size_t>{0}), ConfigError);
  EXPECT_THROW(ff_features(c, std::vector<std::size_t>{5, 3}), ConfigError);
}

std::vector<std::size_t> random_ends(std::size_t n, Rng& rng) {
  std::vector<std::size_t> ends;
  const std::size_t k = rng.below(n);
  for (std::size_t p = 1; p <= n && ends.size() < k; ++p)
    if (rng.below(n) < k) ends.push_back(p);
  return ends;
}

TEST(FfFeatures, DimensionLaw) {
  Rng rng(2);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng.below(127);
    const auto ends = random_ends(n, rng);
    ASSERT_EQ(ff_features(Challenge::random(n, rng), ends).size(), n - ends.size());
    ASSERT_EQ(FeatureMap::feed_forward(ends).dim(n), n - ends.size());
  }
}

TEST(FfFeatures, AllZeroGivesAllOnes) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(100);
    const auto ends = random_ends(n, rng);
    ASSERT_EQ(ff_features(Challenge::zeros(n), ends), FeatureRow(n - ends.size(), 1.0));
  }
}

// Blocks are the parity of each sub-challenge, so a flip inside block j
// changes nothing outside block j.
TEST(FfFeatures, Locality) {
  Rng rng(4);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 4 + rng.below(80);
    const auto ends = random_ends(n, rng);
    auto c = Challenge::random(n, rng);
    const auto before = ff_features(c, ends);
    std::size_t pos = rng.below(n);
    while (std::find(ends.begin(), ends.end(), pos + 1) != ends.end()) pos = rng.below(n);
    c.set(pos, 1 - c[pos]);
    const auto after = ff_features(c, ends);
    // block bounds in feature coordinates
    std::size_t offset = 0, prev_end = 0;
    std::size_t lo = 0, hi = 0;
    for (std::size_t b = 0; b <= ends.size(); ++b) {
      const std::size_t end = b < ends.size() ? ends[b] : n + 1;
      const std::size_t len = end - prev_end - 1;
      if (pos + 1 > prev_end && pos + 1 < end) {
        lo = offset;
        hi = offset + len;
      }
      offset += len;
      prev_end = end;
    }
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (i < lo || i >= hi) ASSERT_EQ(before[i], after[i]);
    }
    ASSERT_NE(before, after);
  }
}

TEST(FeatureMap, ForInstance) {
  InstanceDescriptor d;
  d.arch = Architecture::kFf;
  d.loops = resolve_loop_layout("Loop_D");
  EXPECT_EQ(FeatureMap::for_instance(d).end_positions(), (std::vector<std::size_t>{62, 63, 64}));
  d.arch = Architecture::kMn;
  EXPECT_TRUE(FeatureMap::for_instance(d).is_plain());
  d.arch = Architecture::kIpuf;
  EXPECT_TRUE(FeatureMap::for_instance(d).is_plain());
}

TEST(FeatureMap, ApplyMatchesFunction) {
  const auto map = FeatureMap::feed_forward({25, 30});
  Rng rng(5);
  const auto c = Challenge::random(64, rng);
  std::vector<double> out(map.dim(64));
  map.apply(c.bits(), out);
  EXPECT_EQ(out, ff_features(c, std::vector<std::size_t>{25, 30}));
  EXPECT_EQ(map(c), out);
}

}  // namespace
