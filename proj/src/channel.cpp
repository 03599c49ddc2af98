#include "decoy/channel.h"

#include <cmath>
#include <string>

#include "decoy/error.h"

namespace decoy {

namespace {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DecoyError(ErrorCode::kInvalidArgument, "eta must lie in [0,1], got " + std::to_string(eta));
  }
}

void check_s0(double s0) {
  if (!(s0 >= 0.0 && s0 < 1.0)) {
    throw DecoyError(ErrorCode::kInvalidArgument, "s0 must lie in [0,1), got " + std::to_string(s0));
  }
}

double rate_from_counts(SourceCounts c) {
  if (c.pulses == 0) throw DecoyError(ErrorCode::kInvalidArgument, "pulse count must be >= 1");
  return static_cast<double>(c.clicks) / static_cast<double>(c.pulses);
}

}  // namespace

ChannelModel ChannelModel::uniform(double eta, double s0) {
  return per_fock({{1, eta}}, s0);
}

ChannelModel ChannelModel::per_fock(std::map<int, double> eta_by_photon_number, double s0) {
  check_s0(s0);
  if (eta_by_photon_number.empty()) {
    throw DecoyError(ErrorCode::kInvalidArgument, "channel needs at least one eta_n");
  }
  for (const auto& [n, eta] : eta_by_photon_number) {
    if (n < 1) throw DecoyError(ErrorCode::kInvalidArgument, "eta_n is defined for n >= 1");
    check_eta(eta);
  }
  ChannelModel ch;
  ch.eta_ = std::move(eta_by_photon_number);
  ch.s0_ = s0;
  return ch;
}

double ChannelModel::eta(int n) const {
  if (eta_.empty()) return 0.0;
  auto it = eta_.upper_bound(n);
  if (it == eta_.begin()) return it->second;
  return std::prev(it)->second;
}

std::optional<double> ChannelModel::uniform_eta() const {
  if (eta_.empty()) return 0.0;
  const double first = eta_.begin()->second;
  for (const auto& [n, eta] : eta_) {
    if (eta != first) return std::nullopt;
  }
  return first;
}

ObservedRates ObservedRates::from_counts(SourceCounts vacuum, SourceCounts mu, SourceCounts mup) {
  ObservedRates r;
  r.S0 = rate_from_counts(vacuum);
  r.S_mu = rate_from_counts(mu);
  r.S_mup = rate_from_counts(mup);
  r.vacuum_counts = vacuum;
  r.mu_counts = mu;
  r.mup_counts = mup;
  return r;
}

void ObservedRates::validate() const {
  for (double s : {S0, S_mu, S_mup}) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw DecoyError(ErrorCode::kInvalidArgument, "counting rates must lie in [0,1]");
    }
  }
}

double click_probability(int n, const ChannelModel& ch) {
  if (n <= 0) return ch.s0();
  const double eta = ch.eta(n);
  // 1 - (1-s0)(1-eta)^n without losing small values to cancellation.
  const double log_miss = std::log1p(-ch.s0()) + n * std::log1p(-eta);
  return eta == 1.0 ? 1.0 : -std::expm1(log_miss);
}

double expected_rate(Intensity mu, const ChannelModel& ch) {
  const int n_max = truncation_photon_number(mu);
  double rate = 0.0;
  for (int n = 0; n <= n_max; ++n) rate += poisson_pmf(mu, n) * click_probability(n, ch);
  return rate;
}

double expected_tagged_fraction(Intensity mu, const ChannelModel& ch) {
  const double total = expected_rate(mu, ch);
  if (total <= 0.0) throw DecoyError(ErrorCode::kZeroRate, "expected counting rate is zero");
  const int n_max = truncation_photon_number(mu);
  double tagged = 0.0;
  for (int n = 2; n <= n_max; ++n) tagged += poisson_pmf(mu, n) * click_probability(n, ch);
  return tagged / total;
}

ObservedRates expected_rates(Intensity mu, Intensity mup, const ChannelModel& ch) {
  ObservedRates r;
  r.S0 = ch.s0();
  r.S_mu = expected_rate(mu, ch);
  r.S_mup = expected_rate(mup, ch);
  return r;
}

}  // namespace decoy
