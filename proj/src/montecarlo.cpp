#include "decoy/montecarlo.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "decoy/error.h"
#include "decoy/rng.h"

namespace decoy {

namespace {

constexpr std::uint64_t kMaxPulses = std::uint64_t{1} << 63;

enum StreamPurpose : std::uint64_t { kPartition = 0, kClicks = 1 };

struct Roles {
  std::optional<std::size_t> vacuum;
  std::optional<std::size_t> signal;
  std::optional<std::size_t> decoy;
};

Roles find_roles(const std::vector<SourceSpec>& sources) {
  Roles roles;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const double m = sources[i].mu.value();
    if (m == 0.0) {
      if (!roles.vacuum) roles.vacuum = i;
      continue;
    }
    if (!roles.signal || m < sources[*roles.signal].mu.value()) {
      roles.signal = i;
    }
  }
  if (roles.signal) {
    const double lowest = sources[*roles.signal].mu.value();
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const double m = sources[i].mu.value();
      if (m > lowest && (!roles.decoy || m < sources[*roles.decoy].mu.value())) roles.decoy = i;
    }
  }
  return roles;
}

std::uint64_t draw_binomial(std::uint64_t trials, double p, StreamRng& rng) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::int64_t> dist(static_cast<std::int64_t>(trials), p);
  return static_cast<std::uint64_t>(dist(rng));
}

SourceOutcome simulate_source(const SourceSpec& spec, std::size_t index, const SessionConfig& config) {
  const double beta = (config.intensity_error && !spec.mu.is_vacuum()) ? config.intensity_error->beta : 0.0;
  const int n_max = truncation_photon_number(Intensity(spec.mu.value() * (1.0 + beta)));
  const auto probs = averaged_photon_distribution(spec.mu, beta, n_max);

  std::vector<double> tail(probs.size() + 1, 0.0);
  for (std::size_t n = probs.size(); n-- > 0;) tail[n] = tail[n + 1] + probs[n];

  SourceOutcome out;
  out.mu = spec.mu;
  out.pulses = spec.pulses;
  out.class_pulses.assign(probs.size(), 0);

  // Multinomial as a chain of conditional binomials.
  std::uint64_t remaining = spec.pulses;
  for (int n = 0; n < n_max && remaining > 0; ++n) {
    StreamRng rng(config.seed, index, static_cast<std::uint64_t>(n), kPartition);
    const double p = tail[n] > 0.0 ? probs[n] / tail[n] : 1.0;
    const std::uint64_t k = draw_binomial(remaining, p, rng);
    out.class_pulses[n] = k;
    remaining -= k;
  }
  out.class_pulses[n_max] += remaining;

  for (int n = 0; n <= n_max; ++n) {
    StreamRng rng(config.seed, index, static_cast<std::uint64_t>(n), kClicks);
    const std::uint64_t clicks = draw_binomial(out.class_pulses[n], click_probability(n, config.channel), rng);
    out.clicks += clicks;
    if (n == 0) {
      out.vacuum_clicks += clicks;
    } else if (n == 1) {
      out.single_clicks += clicks;
    } else {
      out.tagged_clicks += clicks;
    }
  }
  return out;
}

double uniform01(StreamRng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double log_uniform(StreamRng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * uniform01(rng));
}

// (mu, mu') pairs from the published finite-size table.
constexpr std::array<std::array<double, 2>, 8> kTablePairs{{{0.2, 0.34},
                                                           {0.25, 0.38},
                                                           {0.3, 0.43},
                                                           {0.35, 0.45},
                                                           {0.2, 0.39},
                                                           {0.25, 0.41},
                                                           {0.3, 0.45},
                                                           {0.35, 0.47}}};

CampaignTrial run_trial(const CampaignConfig& cfg, std::size_t index) {
  StreamRng rng(cfg.seed, index, 0xCA3D, 0);
  CampaignTrial trial;
  trial.index = index;
  trial.seed = mix64(cfg.seed ^ mix64(index + 1));
  const auto& pair = kTablePairs[rng() % kTablePairs.size()];
  trial.mu = pair[0];
  trial.mu_prime = pair[1];
  trial.pulses = std::round(log_uniform(rng, cfg.N_min, cfg.N_max));
  trial.s0 = cfg.s0_max * uniform01(rng);

  std::map<int, double> eta;
  for (int n = 1; n <= cfg.eta_classes; ++n) eta[n] = log_uniform(rng, cfg.eta_min, cfg.eta_max);

  SessionConfig session;
  const auto N = static_cast<std::uint64_t>(trial.pulses);
  session.sources = {{Intensity(0.0), static_cast<std::uint64_t>(0.4 * trial.pulses)},
                     {Intensity(trial.mu), N},
                     {Intensity(trial.mu_prime), N}};
  session.channel = ChannelModel::per_fock(std::move(eta), trial.s0);
  session.seed = trial.seed;

  FluctuationParams params;
  params.coefficient = cfg.coefficient;
  try {
    const auto result = soundness_trial(session, cfg.method, params);
    trial.verified_delta = result.verified_delta;
    trial.true_delta = result.true_delta;
    trial.sound = result.sound;
  } catch (const DecoyError& e) {
    if (e.code() == ErrorCode::kNoSolution) {
      trial.sound = true;
    } else if (e.code() == ErrorCode::kNoData) {
      trial.no_data = true;
      trial.sound = true;
    } else {
      throw;
    }
  }
  return trial;
}

}  // namespace

void SessionConfig::validate() const {
  for (const auto& s : sources) {
    if (s.pulses >= kMaxPulses) throw DecoyError(ErrorCode::kOverflow, "pulse count must be below 2^63");
    if (s.pulses == 0) throw DecoyError(ErrorCode::kInvalidArgument, "every source needs at least one pulse");
  }
  const Roles roles = find_roles(sources);
  if (!roles.vacuum || !roles.signal || !roles.decoy) {
    throw DecoyError(ErrorCode::kInvalidArgument,
                     "session needs a vacuum source and two distinct non-vacuum intensities");
  }
  if (intensity_error && !(intensity_error->beta >= 0.0 && intensity_error->beta < 1.0)) {
    throw DecoyError(ErrorCode::kInvalidArgument, "intensity error beta must lie in [0, 1)");
  }
}

std::optional<double> SourceOutcome::true_delta() const {
  if (clicks == 0) return std::nullopt;
  return static_cast<double>(tagged_clicks) / static_cast<double>(clicks);
}

ObservedRates SimulationOutcome::rates() const {
  const auto& v = sources[vacuum_index];
  const auto& s = sources[signal_index];
  const auto& d = sources[decoy_index];
  return ObservedRates::from_counts({v.clicks, v.pulses}, {s.clicks, s.pulses}, {d.clicks, d.pulses});
}

SimulationOutcome simulate(const SessionConfig& config, unsigned threads) {
  config.validate();
  const Roles roles = find_roles(config.sources);
  SimulationOutcome out;
  out.vacuum_index = *roles.vacuum;
  out.signal_index = *roles.signal;
  out.decoy_index = *roles.decoy;
  out.sources.resize(config.sources.size());

  if (threads <= 1) {
    for (std::size_t i = 0; i < config.sources.size(); ++i) {
      out.sources[i] = simulate_source(config.sources[i], i, config);
    }
    return out;
  }
  std::vector<std::future<SourceOutcome>> pending;
  for (std::size_t i = 0; i < config.sources.size(); ++i) {
    pending.push_back(std::async(std::launch::async, simulate_source, std::cref(config.sources[i]), i,
                                 std::cref(config)));
  }
  for (std::size_t i = 0; i < pending.size(); ++i) out.sources[i] = pending[i].get();
  return out;
}

TrialOutcome soundness_trial(const SessionConfig& config, BoundMethod method,
                             const FluctuationParams& params, const EpsilonCaps& caps) {
  const bool has_light = std::any_of(config.sources.begin(), config.sources.end(),
                                     [](const SourceSpec& s) { return !s.mu.is_vacuum(); });
  if (!has_light) throw DecoyError(ErrorCode::kNoData, "no non-vacuum source, tagged fraction undefined");

  const auto outcome = simulate(config);
  const auto truth = outcome.signal().true_delta();
  if (!truth) throw DecoyError(ErrorCode::kNoData, "signal source produced no clicks");

  FluctuationParams actual = params;
  actual.N_mu = static_cast<double>(outcome.signal().pulses);
  actual.N_mup = static_cast<double>(outcome.decoy().pulses);
  actual.N_0 = static_cast<double>(outcome.sources[outcome.vacuum_index].pulses);

  const auto bound = compute_bound(method, outcome.signal().mu, outcome.decoy().mu, outcome.rates(), actual, caps);
  TrialOutcome trial;
  trial.verified_delta = bound.delta;
  trial.true_delta = *truth;
  trial.sound = bound.delta >= *truth;
  return trial;
}

CampaignOutcome run_campaign(const CampaignConfig& config) {
  if (!(config.N_min >= 1.0 && config.N_max >= config.N_min && config.N_max < 9.2e18)) {
    throw DecoyError(ErrorCode::kInvalidArgument, "campaign needs 1 <= N_min <= N_max < 2^63");
  }
  if (!(config.eta_min > 0.0 && config.eta_max <= 1.0 && config.eta_min <= config.eta_max)) {
    throw DecoyError(ErrorCode::kInvalidArgument, "campaign eta range must lie in (0, 1]");
  }
  if (config.eta_classes < 1) throw DecoyError(ErrorCode::kInvalidArgument, "eta_classes must be >= 1");

  CampaignOutcome out;
  out.trials.resize(config.trials);
  const unsigned workers = std::max(1U, std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials)));
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto work = [&] {
    try {
      for (std::size_t i = next++; i < config.trials; i = next++) out.trials[i] = run_trial(config, i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = config.trials;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  for (const auto& t : out.trials) {
    if (t.no_data) ++out.no_data;
    else if (!t.verified_delta) ++out.refused;
    if (t.sound) ++out.sound;
    else ++out.unsound;
  }
  return out;
}

}  // namespace decoy
