#include <gtest/gtest.h>

#include <cmath>

#include "copuf/errors.hpp"
#include "copuf/puf_core.hpp"
#include "oracles.hpp"

namespace {

using namespace copuf;

TEST(Challenge, ParseAndFormat) {
  const auto c = Challenge::parse("0110");
  EXPECT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0], 0);
  EXPECT_EQ(c[1], 1);
  EXPECT_EQ(c.to_string(), "0110");
  EXPECT_THROW(Challenge::parse("01a"), ConfigError);
  EXPECT_THROW(Challenge(std::vector<std::uint8_t>{0, 2}), ConfigError);
  EXPECT_THROW(Challenge::parse(""), ConfigError);
}

TEST(Challenge, RandomMarginals) {
  Rng rng(11);
  std::vector<int> ones(64, 0);
  const int count = 100000;
  for (int i = 0; i < count; ++i) {
    const auto c = Challenge::random(64, rng);
    for (std::size_t j = 0; j < 64; ++j) ones[j] += c[j];
  }
  for (std::size_t j = 0; j < 64; ++j) EXPECT_NEAR(ones[j] / double(count), 0.5, 0.01) << "position " << j;
}

TEST(DeriveWeights, Deterministic) {
  const auto a = derive_weights(42, 64);
  const auto b = derive_weights(42, 64);
  const auto c = derive_weights(43, 64);
  ASSERT_EQ(a.size(), 65u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (double w : a) EXPECT_TRUE(std::isfinite(w));
}

TEST(DeriveWeights, Rejects) {
  EXPECT_THROW(derive_weights(1, 0), ConfigError);
  EXPECT_THROW(derive_weights(1, 8, 0.0, 0.0), ConfigError);
  EXPECT_THROW(derive_weights(1, 8, 0.0, -1.0), ConfigError);
}

TEST(DeriveWeights, FirstEntryMeanOverInstances) {
  double sum = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) sum += derive_weights(seed, 64)[0];
  EXPECT_NEAR(sum / 10000, 0.0, 0.05);
}

TEST(DeriveWeights, MeanAndScale) {
  double sum = 0, sum2 = 0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    for (double w : derive_weights(seed, 64, 3.0, 2.0)) {
      sum += w;
      sum2 += w * w;
      ++count;
    }
  }
  const double mean = sum / count;
  EXPECT_NEAR(mean, 3.0, 0.05);
  EXPECT_NEAR(std::sqrt(sum2 / count - mean * mean), 2.0, 0.05);
}

TEST(Parity, HandExamples) {
  EXPECT_EQ(parity_transform(Challenge::parse("0000")), (ParityVector{1, 1, 1, 1, 1}));
  EXPECT_EQ(parity_transform(Challenge::parse("011")), (ParityVector{1, 1, -1, 1}));
  std::string s(64, '0');
  s[0] = '1';
  const auto phi = parity_transform(Challenge::parse(s));
  EXPECT_EQ(phi[0], -1);
  for (std::size_t i = 1; i <= 64; ++i) EXPECT_EQ(phi[i], 1);
}

TEST(Parity, MatchesProductOracleAndRecursion) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(64);
    const auto c = Challenge::random(n, rng);
    const auto phi = parity_transform(c);
    ASSERT_EQ(phi, oracle::parity(oracle::bits_of(c)));
    ASSERT_EQ(phi[n], 1.0);
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(phi[i], phi[i + 1] * (1 - 2 * c[i]));
  }
}

// Property: c[i] = (1 - phi[i] / phi[i+1]) / 2 recovers the challenge.
TEST(Parity, Involution) {
  Rng rng(6);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.below(64);
    const auto c = Challenge::random(n, rng);
    const auto phi = parity_transform(c);
    std::vector<std::uint8_t> back(n);
    for (std::size_t i = 0; i < n; ++i) back[i] = static_cast<std::uint8_t>((1 - phi[i] / phi[i + 1]) / 2);
    ASSERT_EQ(Challenge(back), c);
  }
}

TEST(EvaluateDelay, DotProduct) {
  Rng rng(0);
  const std::vector<double> w{1, -2, 0.5}, phi{1, -1, 1};
  EXPECT_DOUBLE_EQ(evaluate_delay(w, phi, NoiseModel{}, rng), 3.5);
  EXPECT_EQ(evaluate_delay(w, phi, NoiseModel{}, rng), evaluate_delay(w, phi, NoiseModel{}, rng));
  EXPECT_THROW(evaluate_delay(w, std::vector<double>{1, 1}, NoiseModel{}, rng), ConfigError);
}

TEST(EvaluateDelay, NoiseFreeConsumesNoRandomness) {
  Rng a(8), b(8);
  const std::vector<double> w{1, 2}, phi{1, 1};
  evaluate_delay(w, phi, NoiseModel{}, a);
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

// Var(sum_i eta_i phi_i) = (n+1) sd^2 for independent eta and phi_i = +-1.
TEST(EvaluateDelay, NoiseStddevMatchesSumOfTerms) {
  const auto w = derive_weights(1, 64);
  Rng crng(2);
  const auto phi = parity_transform(Challenge::random(64, crng));
  const double base = oracle::dot(w, phi);
  Rng rng(3);
  const NoiseModel noise{0.05, 1.0};
  double sum2 = 0;
  const int count = 10000;
  for (int i = 0; i < count; ++i) {
    const double d = evaluate_delay(w, phi, noise, rng) - base;
    sum2 += d * d;
  }
  const double expected = 0.05 * std::sqrt(65.0);
  EXPECT_NEAR(std::sqrt(sum2 / count), expected, 0.1 * expected);
}

TEST(Arbitrate, Rule) {
  EXPECT_EQ(arbitrate(-0.3), 1);
  EXPECT_EQ(arbitrate(0.3), 0);
  EXPECT_EQ(arbitrate(0.0), 0);
}

TEST(Apuf, BiasOnlyInstances) {
  ApufInstance pos{64, WeightVector(65, 0.0), 0};
  pos.weights[64] = 10;
  ApufInstance neg = pos;
  neg.weights[64] = -10;
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto c = Challenge::random(64, rng);
    ASSERT_EQ(apuf_respond(pos, c, NoiseModel{}, rng), 0);
    ASSERT_EQ(apuf_respond(neg, c, NoiseModel{}, rng), 1);
  }
}

TEST(Apuf, DotProductOracle) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = ApufInstance::create(seed, 64);
    Rng rng(seed + 100);
    for (int i = 0; i < 100; ++i) {
      const auto c = Challenge::random(64, rng);
      ASSERT_EQ(apuf_respond(inst, c, NoiseModel{}, rng), oracle::apuf(inst.weights, oracle::bits_of(c)));
    }
  }
}

TEST(Apuf, StageMismatch) {
  const auto inst = ApufInstance::create(1, 64);
  Rng rng(1);
  EXPECT_THROW(apuf_respond(inst, Challenge::zeros(32), NoiseModel{}, rng), ConfigError);
}

TEST(Apuf, FlipSymmetry) {
  const auto inst = ApufInstance::create(9, 64);
  ApufInstance negated = inst;
  for (auto& w : negated.weights) w = -w;
  Rng rng(10);
  for (int i = 0; i < 1000; ++i) {
    const auto c = Challenge::random(64, rng);
    if (oracle::dot(inst.weights, parity_transform(c)) == 0.0) continue;
    ASSERT_NE(apuf_respond(inst, c, NoiseModel{}, rng), apuf_respond(negated, c, NoiseModel{}, rng));
  }
}

TEST(Apuf, NoiseMonotonicity) {
  const auto inst = ApufInstance::create(12, 64);
  double previous = -1;
  for (double sigma : {0.0, 0.02, 0.05, 0.1}) {
    Rng crng(13), nrng(14);
    int flips = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto c = Challenge::random(64, crng);
      flips += apuf_respond(inst, c, NoiseModel{sigma, kNoiseCalibration}, nrng) !=
               apuf_respond(inst, c, NoiseModel{}, nrng);
    }
    const double rate = flips / 10000.0;
    if (sigma == 0.0) EXPECT_EQ(rate, 0.0);
    EXPECT_GE(rate, previous);
    previous = rate;
  }
}

TEST(Noise, Calibration) {
  const auto m = calibrated_noise(0.05);
  EXPECT_EQ(m.sigma, 0.05);
  EXPECT_EQ(m.scale, kNoiseCalibration);
  EXPECT_DOUBLE_EQ(m.stddev(), 0.05 * kNoiseCalibration);
  EXPECT_TRUE(calibrated_noise(0.0).noise_free());
}

}  // namespace
