#include <gtest/gtest.h>

#include "copuf/descriptor.hpp"
#include "copuf/errors.hpp"
#include "copuf/metrics.hpp"

namespace {

using namespace copuf;

std::vector<PufInstance> one_of_each() {
  const auto a = resolve_loop_layout("Loop_A");
  return {ApufInstance::create(1, 64), FfApufInstance::create(2, 64, resolve_loop_layout("Loop_B")),
          make_xor_ff(3, 64, a, 3), make_oax_ff(4, 64, a, 2, 3, 1), make_mn(5, 64, {32, 16, 8}),
          make_ipuf(6, 64, 3, 3, 33)};
}

BerOptions small(double sigma, std::uint64_t seed = 7) {
  BerOptions o;
  o.challenges = 2000;
  o.repeats = 5;
  o.noise = calibrated_noise(sigma);
  o.seed = seed;
  return o;
}

TEST(Ber, ZeroNoiseIsZero) {
  for (const auto& inst : one_of_each()) EXPECT_EQ(measure_ber(inst, small(0.0)), 0.0);
}

TEST(Ber, NonDecreasingInSigma) {
  for (const auto& inst : one_of_each()) {
    double previous = -1;
    for (double sigma : {0.0, 0.02, 0.05}) {
      const double ber = measure_ber(inst, small(sigma));
      EXPECT_GE(ber, previous);
      EXPECT_LE(ber, 1.0);
      previous = ber;
    }
  }
}

TEST(Ber, ThreadIndependent) {
  const auto inst = make_xor_ff(8, 64, resolve_loop_layout("Loop_A"), 4);
  auto o = small(0.05);
  o.challenges = 5000;
  const double one = measure_ber(inst, o);
  o.threads = 4;
  EXPECT_EQ(measure_ber(inst, o), one);
  EXPECT_EQ(measure_uniformity(inst, 5000, 9, 1), measure_uniformity(inst, 5000, 9, 3));
}

TEST(Ber, MajorityNeverExceedsHalfAndDiffersFromGolden) {
  const auto inst = make_xor_ff(10, 64, resolve_loop_layout("Loop_A"), 6);
  auto o = small(0.05);
  const double golden = measure_ber(inst, o);
  o.reference = Reference::kMajority;
  const double majority = measure_ber(inst, o);
  EXPECT_LE(majority, 0.5);
  EXPECT_GT(majority, 0.0);
  EXPECT_NE(golden, majority);
}

// One noisy repeat is always its own majority.
TEST(Ber, MajorityOfOneRepeatIsZero) {
  auto o = small(0.1);
  o.repeats = 1;
  o.reference = Reference::kMajority;
  EXPECT_EQ(measure_ber(ApufInstance::create(11, 64), o), 0.0);
}

TEST(Uniformity, ConstantInstances) {
  ApufInstance zero{64, WeightVector(65, 0.0), 0};
  zero.weights[64] = 100;
  EXPECT_EQ(measure_uniformity(zero, 5000, 1), 0.0);
  zero.weights[64] = -100;
  EXPECT_EQ(measure_uniformity(zero, 5000, 1), 1.0);
}

TEST(Uniformity, FreshApufMostlyBalanced) {
  int inside = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const double u = measure_uniformity(ApufInstance::create(seed, 64), 2000, seed);
    inside += u >= 0.40 && u <= 0.60;
  }
  EXPECT_GE(inside, 950);
}

TEST(Metrics, ReportFields) {
  const auto r = measure_metrics(ApufInstance::create(12, 64), 0.05, 13, 1000, 7);
  EXPECT_EQ(r.challenges_used, 1000u);
  EXPECT_EQ(r.repeats, 7u);
  EXPECT_EQ(r.sigma_noise, 0.05);
  EXPECT_EQ(r.calibration, kNoiseCalibration);
  const auto j = to_json(r);
  EXPECT_EQ(j.at("repeats"), 7);
  EXPECT_EQ(j.at("reference"), "golden");
  EXPECT_DOUBLE_EQ(j.at("reliability").get<double>(), 1.0 - r.ber);
}

TEST(Metrics, RejectsZeroRepeats) {
  auto o = small(0.05);
  o.repeats = 0;
  EXPECT_THROW(measure_ber(ApufInstance::create(1, 64), o), ConfigError);
}

TEST(Metrics, ReferenceParse) {
  EXPECT_EQ(parse_reference("majority"), Reference::kMajority);
  EXPECT_EQ(parse_reference("golden"), Reference::kGolden);
  EXPECT_THROW(parse_reference("first"), ConfigError);
}

}  // namespace
