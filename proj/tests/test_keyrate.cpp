#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "decoy/error.h"
#include "decoy/keyrate.h"

namespace decoy {
namespace {

DistillationInput input(double t_b, double t_p, double delta, double n_r = 1e6) {
  DistillationInput in;
  in.t_b = t_b;
  in.t_p = t_p;
  in.delta = delta;
  in.n_r = n_r;
  return in;
}

TEST(BinaryEntropy, Examples) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-15);
  EXPECT_NEAR(binary_entropy(0.05), 0.286396957115956, 1e-14);
  EXPECT_NEAR(binary_entropy(0.11), binary_entropy(0.89), 1e-15);
  EXPECT_THROW(binary_entropy(-0.01), DecoyError);
  EXPECT_THROW(binary_entropy(1.01), DecoyError);
}

TEST(DistillationCosts, Examples) {
  const auto c = distillation_costs(input(0.05, 0.05, 0.0));
  EXPECT_NEAR(c.ec_bits, 286396.957115956, 1e-6);
  EXPECT_NEAR(c.pa_bits, 286396.957115956, 1e-6);

  const auto tagged = distillation_costs(input(0.05, 0.05, 0.25));
  EXPECT_NEAR(tagged.pa_bits, 1e6 * (0.25 + 0.75 * binary_entropy(0.05 / 0.75)), 1e-6);
}

TEST(DistillationCosts, UntaggedPhaseErrorAtOneHalfConsumesEverything) {
  const auto c = distillation_costs(input(0.01, 0.4, 0.2));
  EXPECT_NEAR(c.pa_bits, 1e6, 1e-6);
  EXPECT_NEAR(distillation_costs(input(0.01, 0.45, 0.2)).pa_bits, 1e6, 1e-6);
  EXPECT_NEAR(distillation_costs(input(0.01, 0.01, 1.0)).pa_bits, 1e6, 1e-6);
  EXPECT_EQ(key_fraction(input(0.01, 0.4, 0.2)), 0.0);
}

TEST(KeyFraction, Examples) {
  EXPECT_NEAR(key_fraction(input(0.05, 0.05, 0.0)), 0.427206085768088, 1e-14);
  EXPECT_NEAR(key_fraction(input(0.05, 0.05, 0.25)), 0.198583541617978, 1e-14);
  EXPECT_NEAR(key_fraction(input(0.0, 0.0, 0.0)), 1.0, 1e-15);
  EXPECT_EQ(key_fraction(input(0.2, 0.2, 0.3)), 0.0);
}

TEST(KeyFraction, ValidationRejectsOutOfRange) {
  EXPECT_THROW(key_fraction(input(0.6, 0.05, 0.1)), DecoyError);
  EXPECT_THROW(key_fraction(input(0.05, -0.1, 0.1)), DecoyError);
  EXPECT_THROW(key_fraction(input(0.05, 0.05, 1.2)), DecoyError);
  EXPECT_THROW(distillation_costs(input(0.05, 0.05, 0.1, -1.0)), DecoyError);
  EXPECT_THROW(key_fraction(input(std::nan(""), 0.05, 0.1)), DecoyError);
}

TEST(KeyFraction, RangeAndMonotonicity) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> err(0.0, 0.5), del(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double tb = err(gen), tp = err(gen), d = del(gen);
    const double k = key_fraction(input(tb, tp, d));
    EXPECT_GE(k, 0.0);
    EXPECT_LE(k, 1.0);
    const double step = 1e-3;
    if (d + step <= 1.0) EXPECT_LE(key_fraction(input(tb, tp, d + step)), k + 1e-15);
    if (tb + step <= 0.5) EXPECT_LE(key_fraction(input(tb + step, tp, d)), k + 1e-15);
    if (tp + step <= 0.5) EXPECT_LE(key_fraction(input(tb, tp + step, d)), k + 1e-15);
  }
}

TEST(KeyFraction, ZeroTaggingIsSymmetricShannonRate) {
  for (double t = 0.0; t <= 0.11; t += 0.01) {
    const double expected = std::max(0.0, 1.0 - 2.0 * binary_entropy(t));
    EXPECT_NEAR(key_fraction(input(t, t, 0.0)), expected, 1e-14);
  }
}

TEST(KeyFraction, CostsAndFractionAgree) {
  const auto in = input(0.03, 0.04, 0.15, 1e5);
  const auto c = distillation_costs(in);
  EXPECT_NEAR((in.n_r - c.ec_bits - c.pa_bits) / in.n_r, key_fraction(in), 1e-12);
}

}  // namespace
}  // namespace decoy
