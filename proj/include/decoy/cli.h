#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "decoy/bounds.h"
#include "decoy/channel.h"
#include "decoy/keyrate.h"
#include "decoy/montecarlo.h"

namespace decoy::cli {

enum class Mode { kBound, kSimulate, kTable1, kKeyrate, kCampaign };
enum class Format { kCsv, kTable };

const char* to_string(Mode m);
Mode parse_mode(const std::string& s);

// Bad or missing config field. path() is the dotted location, e.g.
// "source.mu_prime".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct RunConfig {
  Mode mode = Mode::kBound;

  // source
  std::optional<double> mu;
  std::optional<double> mu_prime;
  double N_mu = 1e10;
  double N_mup = 1e10;
  double N0 = 4e9;
  std::optional<double> beta;

  // channel
  std::optional<ChannelModel> channel;

  std::optional<ObservedRates> observed;
  FluctuationParams fluctuation;
  EpsilonCaps epsilon;

  // run
  std::vector<BoundMethod> methods = {BoundMethod::kHwang, BoundMethod::kAsymptotic3,
                                      BoundMethod::kFluctuation, BoundMethod::kOperational};
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::optional<DistillationInput> keyrate;  // delta < 0 means "take it from the bound"
  CampaignConfig campaign;
  std::string out;  // empty: stdout
  Format format = Format::kCsv;
  bool full_precision = false;
};

// Parses and validates everything the selected mode needs. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);

// One row of the bound / table1 CSV.
struct BoundRow {
  std::string method;
  double mu = 0.0;
  std::optional<double> mu_prime;
  std::optional<double> eta;
  double s0 = 0.0;
  std::optional<double> N_mu;
  std::optional<double> N_mup;
  std::optional<double> N0;
  double delta = 0.0;
  std::optional<double> delta_prime;
  double s1_lower = 0.0;
  double sc_upper = 0.0;
  std::optional<double> paper_value;
  std::optional<double> abs_dev;
};

extern const char* const kBoundHeader;

// Shortest round-trip form, or %.17g when full is set.
std::string format_double(double v, bool full = false);
double parse_double(const std::string& s);

std::string bound_csv(const std::vector<BoundRow>& rows, bool full_precision);
std::vector<BoundRow> parse_bound_csv(const std::string& text);

// Published table, recomputed. Δ columns of the finite-size rows hold the
// complement of the untagged lower bound (vacuum clicks counted as tagged).
std::vector<BoundRow> table1_rows();

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNoSolution = 2;

// Runs the configured mode, writing the report to `out` and diagnostics to
// `err`. Returns one of the exit codes above.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace decoy::cli
