#pragma once

#include <optional>
#include <string>

#include "decoy/channel.h"
#include "decoy/photon_source.h"

namespace decoy {

enum class BoundMethod { kHwang, kAsymptotic3, kFluctuation, kOperational };

const char* to_string(BoundMethod method);
// Accepts "hwang", "asymptotic", "fluctuation", "operational" (case-insensitive)
// as well as the upper-case tags. Throws DecoyError(kInvalidArgument).
BoundMethod parse_bound_method(const std::string& name);

/// Verified bounds for one (mu, mu') pair.
///
/// `delta` bounds the fraction of clicks from source A caused by pulses that
/// left Alice with two or more photons, and always satisfies
/// delta == c(mu) * sc_upper / S_mu. `untagged_lower` bounds from below the
/// fraction of clicks caused by single-photon pulses; 1 - untagged_lower
/// additionally charges vacuum-triggered clicks to the adversary, which is
/// how the published tables are tabulated.
struct BoundResult {
  BoundMethod method = BoundMethod::kAsymptotic3;
  double delta = 1.0;
  std::optional<double> delta_prime;
  double s1_lower = 0.0;
  double sc_upper = 0.0;
  double untagged_lower = 0.0;

  // Finite-size diagnostics; zero for asymptotic methods.
  double r1 = 0.0;
  double rc = 0.0;
  int iterations = 0;
  bool failed_closed = false;

  // OPERATIONAL only: s1_lower divided by the eps = 0 lower bound.
  std::optional<double> s1_ratio;

  std::string confidence_note;

  double delta_with_vacuum() const { return 1.0 - untagged_lower; }
};

struct FluctuationParams {
  double N_mu = 1e10;
  double N_mup = 1e10;
  double N_0 = 4e9;
  double coefficient = 10.0;
  double r0 = 0.0;

  // Throws DecoyError(kInvalidArgument) unless counts >= 1, coefficient > 0
  // and 0 <= r0 < 1.
  void validate() const;
};

/// Per-class relative caps |eps_x| for source A (signal) and A_mu' (decoy).
struct EpsilonCaps {
  EpsilonBounds signal;
  EpsilonBounds decoy;

  static EpsilonCaps uniform(double cap) { return {{cap, cap, cap}, {cap, cap, cap}}; }
};

BoundResult hwang_delta(Intensity mu, Intensity mup, const ObservedRates& rates);

BoundResult asymptotic_delta(Intensity mu, Intensity mup, const ObservedRates& rates);

// Upper bound on the tagged fraction of source A_mu' given the bound `delta`
// for source A. Clamped to [0,1].
double delta_prime(Intensity mu, Intensity mup, double delta, const ObservedRates& rates);

// r = coefficient * sqrt(1 / (s * N0)).
double relative_fluctuation(double s, double N0, double coefficient);

// Upper bound exp(-delta_abs^2 N0 / (4 s)) on the chance that two random
// halves of a pool differ in counting rate by more than delta_abs.
double violation_probability(double delta_abs, double s, double N0);

BoundResult fluctuation_delta(Intensity mu, Intensity mup, const ObservedRates& rates,
                              const FluctuationParams& params);

// Worst case over the 64 sign corners of (eps0, eps1, eps_c, eps0', eps1',
// eps_c') at their caps, each corner solved with the finite-size constraints.
BoundResult operational_error_delta(Intensity mu, Intensity mup, const ObservedRates& rates,
                                    const FluctuationParams& params, const EpsilonCaps& caps);

// Dispatch by tag. FLUCTUATION and OPERATIONAL read `params`; OPERATIONAL
// reads `caps`.
// One fixed assignment of signed relative errors on the class weights.
struct EpsilonCorner {
  EpsilonBounds signal;
  EpsilonBounds decoy;
};

// Fluctuation solve with every class weight scaled by (1 + eps). Each eps
// must lie in (-0.5, 0.5).
BoundResult corner_delta(Intensity mu, Intensity mup, const ObservedRates& rates, const FluctuationParams& params,
                         const EpsilonCorner& eps);

BoundResult compute_bound(BoundMethod method, Intensity mu, Intensity mup, const ObservedRates& rates,
                          const FluctuationParams& params, const EpsilonCaps& caps);

}  // namespace decoy
