#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "decoy/photon_source.h"

namespace decoy {

// Overall channel plus detector as seen by Alice: a click probability per
// photon number. A uniform eta is the honest lossy channel; any other map is
// an adversary that can only act on photon number, never on which source a
// pulse came from.
class ChannelModel {
 public:
  ChannelModel() = default;

  // Throws DecoyError(kInvalidArgument) if eta is outside [0,1] or s0 outside [0,1).
  static ChannelModel uniform(double eta, double s0);

  // eta_by_photon_number maps n >= 1 to eta_n. Photon numbers above the
  // largest key reuse that key's value; below the smallest key use the
  // smallest key's value.
  static ChannelModel per_fock(std::map<int, double> eta_by_photon_number, double s0);

  double eta(int n) const;
  double s0() const noexcept { return s0_; }

  // The common eta if every photon number sees the same transmittance.
  std::optional<double> uniform_eta() const;

 private:
  std::map<int, double> eta_;
  double s0_ = 0.0;
};

// Counting data per source. Rates are the only quantities a bound may consume.
struct SourceCounts {
  std::uint64_t clicks = 0;
  std::uint64_t pulses = 0;
};

struct ObservedRates {
  double S0 = 0.0;
  double S_mu = 0.0;
  double S_mup = 0.0;
  std::optional<SourceCounts> vacuum_counts;
  std::optional<SourceCounts> mu_counts;
  std::optional<SourceCounts> mup_counts;

  // Rates taken as n_x / N_x.
  static ObservedRates from_counts(SourceCounts vacuum, SourceCounts mu, SourceCounts mup);

  // Throws DecoyError(kInvalidArgument) if a rate lies outside [0,1].
  void validate() const;
};

double click_probability(int n, const ChannelModel& ch);

double expected_rate(Intensity mu, const ChannelModel& ch);

// Fraction of clicks caused by pulses that left the source with >= 2 photons.
// Throws DecoyError(kZeroRate) if the expected rate is zero.
double expected_tagged_fraction(Intensity mu, const ChannelModel& ch);

// Rates an honest (or adversarial) channel produces on average.
ObservedRates expected_rates(Intensity mu, Intensity mup, const ChannelModel& ch);

}  // namespace decoy
