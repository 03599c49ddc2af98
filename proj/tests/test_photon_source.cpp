#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "decoy/error.h"
#include "decoy/photon_source.h"

namespace decoy {
namespace {

TEST(PoissonPmf, VacuumSourceEmitsVacuum) {
  EXPECT_EQ(poisson_pmf(Intensity(0.0), 0), 1.0);
  EXPECT_EQ(poisson_pmf(Intensity(0.0), 3), 0.0);
}

TEST(PoissonPmf, SinglePhotonAtPointThree) {
  EXPECT_NEAR(poisson_pmf(Intensity(0.3), 1), 0.222245466204515, 1e-12);
}

TEST(PoissonPmf, NormalizesOverTruncatedSupport) {
  double sum = 0.0;
  for (int n = 0; n <= 60; ++n) sum += poisson_pmf(Intensity(0.3), n);
  EXPECT_NEAR(sum, 1.0, 1e-12);

  for (int i = 1; i <= 20; ++i) {
    const Intensity mu(0.1 * i);
    const int n_max = truncation_photon_number(mu);
    double total = 0.0;
    for (int n = 0; n <= n_max; ++n) total += poisson_pmf(mu, n);
    EXPECT_NEAR(total, 1.0, 1e-12) << "mu=" << mu.value();
  }
}

TEST(Truncation, TailBelowCutoffAndMinimal) {
  for (double m : {0.05, 0.3, 1.0, 2.0}) {
    const Intensity mu(m);
    const int n_max = truncation_photon_number(mu);
    auto tail_after = [&](int n) {
      double t = 0.0;
      for (int k = n + 1; k < n + 200; ++k) t += poisson_pmf(mu, k);
      return t;
    };
    EXPECT_LT(tail_after(n_max), kPoissonTailCutoff);
    EXPECT_GE(tail_after(n_max - 1), kPoissonTailCutoff);
  }
  EXPECT_EQ(truncation_photon_number(Intensity(0.0)), 0);
}

TEST(Intensity, RejectsNegativeAndNonFinite) {
  EXPECT_THROW(Intensity(-0.1), DecoyError);
  EXPECT_THROW(Intensity(std::nan("")), DecoyError);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Intensity{inf}, DecoyError);
}

TEST(Decompose, Examples) {
  const auto vac = decompose(Intensity(0.0));
  EXPECT_EQ(vac.p0, 1.0);
  EXPECT_EQ(vac.p1, 0.0);
  EXPECT_EQ(vac.c, 0.0);

  const auto d = decompose(Intensity(0.3));
  EXPECT_NEAR(d.p0, 0.740818220681718, 1e-12);
  EXPECT_NEAR(d.p1, 0.222245466204515, 1e-12);
  EXPECT_NEAR(d.c, 0.0369363131137668, 1e-12);
  EXPECT_NEAR(d.p0 + d.p1 + d.c, 1.0, 1e-12);

  EXPECT_NEAR(decompose(Intensity(0.25)).c, 0.0264990211607439, 1e-12);
}

TEST(Decompose, MultiPhotonWeightPositiveAndAccurateForTinyMu) {
  for (double m : {1e-8, 1e-5, 1e-3, 0.5}) {
    const double c = multi_photon_weight(Intensity(m));
    EXPECT_GT(c, 0.0);
    // Leading behaviour m^2 / 2.
    if (m < 1e-3) EXPECT_NEAR(c / (m * m / 2), 1.0, 1e-3);
  }
}

TEST(ValidatePair, Examples) {
  EXPECT_TRUE(validate_pair(Intensity(0.3), Intensity(0.45)));
  EXPECT_FALSE(validate_pair(Intensity(0.3), Intensity(0.3)));
  EXPECT_FALSE(validate_pair(Intensity(0.3), Intensity(3.0)));
  EXPECT_FALSE(validate_pair(Intensity(0.0), Intensity(0.45)));
  EXPECT_FALSE(validate_pair(Intensity(0.45), Intensity(0.3)));
}

TEST(ResidualDecompose, Examples) {
  const auto r = residual_decompose(Intensity(0.3), Intensity(0.45));
  EXPECT_NEAR(r.d, 0.00390857668573554, 1e-12);
  EXPECT_NEAR(r.p0p + r.p1p + r.c_coeff + r.d, 1.0, 1e-12);

  const auto t = residual_decompose(Intensity(0.2), Intensity(0.34));
  for (double w : {t.p0p, t.p1p, t.c_coeff, t.d}) EXPECT_GE(w, 0.0);
  EXPECT_NEAR(t.p0p + t.p1p + t.c_coeff + t.d, 1.0, 1e-12);

  const auto close = residual_decompose(Intensity(0.3), Intensity(0.3 + 1e-7));
  EXPECT_NEAR(close.d, 0.0, 1e-8);
}

TEST(ResidualDecompose, RejectsInvalidPair) {
  EXPECT_THROW(residual_decompose(Intensity(0.3), Intensity(0.3)), DecoyError);
  try {
    residual_decompose(Intensity(0.3), Intensity(3.0));
    FAIL();
  } catch (const DecoyError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidPair);
  }
}

TEST(ResidualDecompose, RandomValidPairsSumToOne) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  int checked = 0;
  while (checked < 100) {
    const double a = u(gen);
    const double b = a + (1.0 - a) * u(gen);
    if (!validate_pair(Intensity(a), Intensity(b))) continue;
    const auto r = residual_decompose(Intensity(a), Intensity(b));
    EXPECT_NEAR(r.p0p + r.p1p + r.c_coeff + r.d, 1.0, 1e-12);
    EXPECT_GE(r.d, 0.0);
    ++checked;
  }
}

// For mu' > mu every multi-photon term of rho_mu' dominates the matching
// term of the rescaled rho_c: mu'^n >= mu'^2 mu^(n-2).
TEST(ResidualDecompose, ComponentwiseDominance) {
  const Intensity mu(0.3);
  const Intensity mup(0.45);
  const double scale = mup.value() * mup.value() / (mu.value() * mu.value());
  for (int n = 2; n <= 30; ++n) {
    const double lhs = poisson_pmf(mup, n);
    const double rhs = std::exp(-mup.value()) * scale * poisson_pmf(mu, n) / std::exp(-mu.value());
    EXPECT_GE(lhs, rhs * (1 - 1e-12)) << n;
  }
}

TEST(EpsilonBounds, Examples) {
  const auto zero = epsilon_bounds(Intensity(0.3), 0.0);
  EXPECT_EQ(zero.eps0, 0.0);
  EXPECT_EQ(zero.eps1, 0.0);
  EXPECT_EQ(zero.eps_c, 0.0);

  const auto e = epsilon_bounds(Intensity(0.3), 0.02);
  EXPECT_NEAR(e.eps0, 0.00601803605404, 1e-10);
  EXPECT_NEAR(e.eps1, 0.0141023246670164, 1e-10);
  EXPECT_NEAR(e.eps_c, 0.0363534355048017, 1e-10);

  EXPECT_THROW(epsilon_bounds(Intensity(0.3), 1.0), DecoyError);
}

TEST(EpsilonBounds, MonotoneInBeta) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> mu_dist(0.05, 1.5);
  std::uniform_real_distribution<double> beta_dist(0.0, 0.3);
  for (int i = 0; i < 200; ++i) {
    const Intensity mu(mu_dist(gen));
    double b1 = beta_dist(gen);
    double b2 = beta_dist(gen);
    if (b1 > b2) std::swap(b1, b2);
    const auto lo = epsilon_bounds(mu, b1);
    const auto hi = epsilon_bounds(mu, b2);
    EXPECT_LE(lo.eps0, hi.eps0 + 1e-15);
    EXPECT_LE(lo.eps1, hi.eps1 + 1e-15);
    EXPECT_LE(lo.eps_c, hi.eps_c + 1e-15);
  }
}

TEST(AveragedDistribution, MatchesPoissonWithoutErrorAndStaysNormalised) {
  const Intensity mu(0.3);
  const int n_max = truncation_photon_number(Intensity(0.3 * 1.05));
  const auto exact = averaged_photon_distribution(mu, 0.0, n_max);
  for (int n = 0; n < n_max; ++n) EXPECT_DOUBLE_EQ(exact[n], poisson_pmf(mu, n));

  const auto smeared = averaged_photon_distribution(mu, 0.05, n_max);
  double total = 0.0;
  for (double p : smeared) total += p;
  EXPECT_NEAR(total, 1.0, 1e-14);
  // Averaging over [0.285, 0.315] by midpoint quadrature.
  double p1 = 0.0;
  const int steps = 4000;
  for (int i = 0; i < steps; ++i) p1 += poisson_pmf(Intensity(0.285 + 0.03 * (i + 0.5) / steps), 1);
  EXPECT_NEAR(smeared[1], p1 / steps, 1e-10);
}

}  // namespace
}  // namespace decoy
