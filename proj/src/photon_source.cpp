#include "decoy/photon_source.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "decoy/error.h"

namespace decoy {

Intensity::Intensity(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw DecoyError(ErrorCode::kInvalidArgument,
                     "intensity must be finite and non-negative, got " + std::to_string(value));
  }
}

double poisson_pmf(Intensity mu, int n) {
  if (n < 0) return 0.0;
  const double m = mu.value();
  if (m == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n == 0) return std::exp(-m);
  if (n == 1) return m * std::exp(-m);
  return std::exp(n * std::log(m) - m - std::lgamma(n + 1.0));
}

double multi_photon_weight(Intensity mu) {
  const double m = mu.value();
  if (m == 0.0) return 0.0;
  // Series 1 - e^-m (1 + m) = m^2/2 - m^3/3 + m^4/8 - ... loses digits
  // only for very small m; below 1e-4 the leading terms are exact to 1e-16.
  if (m < 1e-4) return m * m * (0.5 - m / 3.0 + m * m / 8.0);
  return -std::expm1(-m) - m * std::exp(-m);
}

SourceDecomposition decompose(Intensity mu) {
  if (mu.is_vacuum()) return {};
  const double m = mu.value();
  return {std::exp(-m), m * std::exp(-m), multi_photon_weight(mu)};
}

bool validate_pair(Intensity mu, Intensity mup) {
  const double a = mu.value();
  const double b = mup.value();
  return b > a && a > 0.0 && b * std::exp(-b) > a * std::exp(-a);
}

ResidualDecomposition residual_decompose(Intensity mu, Intensity mup) {
  if (!validate_pair(mu, mup)) {
    throw DecoyError(ErrorCode::kInvalidPair, "need mu' > mu > 0 and mu' e^-mu' > mu e^-mu");
  }
  const double a = mu.value();
  const double b = mup.value();
  ResidualDecomposition r;
  r.p0p = std::exp(-b);
  r.p1p = b * std::exp(-b);
  r.c_coeff = multi_photon_weight(mu) * (b * b * std::exp(-b)) / (a * a * std::exp(-a));
  r.d = multi_photon_weight(mup) - r.c_coeff;
  if (r.d < -1e-12) {
    throw DecoyError(ErrorCode::kInvalidPair, "residual weight d is negative");
  }
  r.d = std::max(r.d, 0.0);
  return r;
}

namespace {

// Class weights {P0, P1, c} at intensity m.
std::array<double, 3> class_weights(double m) {
  const auto s = decompose(Intensity(m));
  return {s.p0, s.p1, s.c};
}

}  // namespace

EpsilonBounds epsilon_bounds(Intensity mu, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw DecoyError(ErrorCode::kInvalidArgument, "beta must lie in [0, 1)");
  }
  if (mu.is_vacuum() || beta == 0.0) return {};
  const double m = mu.value();
  const auto nominal = class_weights(m);
  std::array<double, 3> worst{0.0, 0.0, 0.0};
  for (double edge : {m * (1.0 - beta), m * (1.0 + beta)}) {
    const auto w = class_weights(edge);
    for (std::size_t i = 0; i < 3; ++i) {
      worst[i] = std::max(worst[i], std::abs(w[i] / nominal[i] - 1.0));
    }
  }
  return {worst[0], worst[1], worst[2]};
}

int truncation_photon_number(Intensity mu) {
  const double m = mu.value();
  if (m == 0.0) return 0;
  // Tail beyond n is summed forward from the terms themselves; subtracting
  // the CDF from 1 cannot resolve 1e-15.
  int n = static_cast<int>(std::floor(m));
  for (;; ++n) {
    double tail = 0.0;
    for (int k = n + 1;; ++k) {
      const double term = poisson_pmf(mu, k);
      tail += term;
      if (term < tail * 1e-17 || term == 0.0) break;
    }
    if (tail < kPoissonTailCutoff) return n;
  }
}

std::vector<double> averaged_photon_distribution(Intensity mu, double beta, int n_max) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw DecoyError(ErrorCode::kInvalidArgument, "beta must lie in [0, 1)");
  }
  if (n_max < 0) throw DecoyError(ErrorCode::kInvalidArgument, "n_max must be >= 0");
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
  const double m = mu.value();
  if (beta == 0.0 || m == 0.0) {
    for (int n = 0; n <= n_max; ++n) p[n] = poisson_pmf(mu, n);
  } else {
    // d/dm CDF_m(n) = -P_m(n), so the average of P_m(n) over [lo, hi] is
    // (CDF_lo(n) - CDF_hi(n)) / (hi - lo).
    const double lo = m * (1.0 - beta);
    const double hi = m * (1.0 + beta);
    double cdf_lo = 0.0;
    double cdf_hi = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      cdf_lo += poisson_pmf(Intensity(lo), n);
      cdf_hi += poisson_pmf(Intensity(hi), n);
      p[n] = (cdf_lo - cdf_hi) / (hi - lo);
    }
  }
  double head = 0.0;
  for (int n = 0; n < n_max; ++n) head += p[n];
  p[n_max] = std::max(0.0, 1.0 - head);
  return p;
}

}  // namespace decoy
