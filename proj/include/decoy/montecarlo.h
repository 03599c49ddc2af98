#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "decoy/bounds.h"
#include "decoy/channel.h"
#include "decoy/photon_source.h"

namespace decoy {

struct SourceSpec {
  Intensity mu;
  std::uint64_t pulses = 0;
};

// Per-pulse intensity drawn uniformly from [mu(1-beta), mu(1+beta)]. Vacuum
// sources are unaffected.
struct IntensityError {
  double beta = 0.0;
};

struct SessionConfig {
  std::vector<SourceSpec> sources;
  ChannelModel channel;
  std::uint64_t seed = 0;
  std::optional<IntensityError> intensity_error;

  // Needs a vacuum source and two distinct non-vacuum intensities, each with
  // at least one pulse. Throws DecoyError(kInvalidArgument / kOverflow).
  void validate() const;
};

struct SourceOutcome {
  Intensity mu;
  std::uint64_t pulses = 0;
  std::uint64_t clicks = 0;
  std::uint64_t vacuum_clicks = 0;
  std::uint64_t single_clicks = 0;
  std::uint64_t tagged_clicks = 0;
  // Pulses per emitted photon number, 0..n_max; sums to `pulses`.
  std::vector<std::uint64_t> class_pulses;

  double rate() const { return pulses ? static_cast<double>(clicks) / static_cast<double>(pulses) : 0.0; }
  std::optional<double> true_delta() const;
};

struct SimulationOutcome {
  std::vector<SourceOutcome> sources;
  // Indices into `sources` of the vacuum, signal (mu) and decoy (mu') roles.
  std::size_t vacuum_index = 0;
  std::size_t signal_index = 0;
  std::size_t decoy_index = 0;

  ObservedRates rates() const;
  const SourceOutcome& signal() const { return sources[signal_index]; }
  const SourceOutcome& decoy() const { return sources[decoy_index]; }
};

// Partitions each source's pulses into photon-number classes by multinomial
// sampling, then draws clicks per class binomially. Output depends only on
// the config (seed included), not on `threads`.
SimulationOutcome simulate(const SessionConfig& config, unsigned threads = 1);

struct TrialOutcome {
  double verified_delta = 1.0;
  double true_delta = 0.0;
  bool sound = false;
};

// Simulates, bounds the signal source's tagged fraction from the observed
// rates, and compares against the simulator's ground truth. Throws
// DecoyError(kNoData) when the signal source produced no clicks or the
// config has no non-vacuum source; bound errors propagate.
TrialOutcome soundness_trial(const SessionConfig& config, BoundMethod method,
                             const FluctuationParams& params, const EpsilonCaps& caps = {});

struct CampaignConfig {
  std::size_t trials = 200;
  double N_min = 1e7;
  double N_max = 1e8;
  double s0_max = 1e-5;
  double eta_min = 1e-3;
  double eta_max = 1.0;
  int eta_classes = 6;  // eta_n drawn for n = 1..eta_classes; higher n reuse the last
  BoundMethod method = BoundMethod::kFluctuation;
  double coefficient = 10.0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct CampaignTrial {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double mu = 0.0;
  double mu_prime = 0.0;
  double pulses = 0.0;
  double s0 = 0.0;
  std::optional<double> verified_delta;  // empty when the bound refused (NoSolution)
  double true_delta = 0.0;
  bool sound = false;
  bool no_data = false;
};

struct CampaignOutcome {
  std::vector<CampaignTrial> trials;
  std::size_t sound = 0;
  std::size_t unsound = 0;
  std::size_t refused = 0;
  std::size_t no_data = 0;
};

// Randomised adversarial channels (eta_n log-uniform, independent per photon
// number) over the tabulated (mu, mu') pairs. A refused bound counts as sound: the
// protocol aborts instead of emitting a key.
CampaignOutcome run_campaign(const CampaignConfig& config);

}  // namespace decoy
