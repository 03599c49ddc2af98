#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "decoy/cli.h"

using decoy::cli::ConfigError;
using nlohmann::json;

int main(int argc, char** argv) {
  CLI::App app{"decoy-state tagged-fraction bounds, simulation and key-rate reports"};
  std::string config_path, mode, out, format;
  std::uint64_t seed = 0;
  bool full_precision = false;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--mode", mode, "bound | simulate | table1 | keyrate | campaign");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides run.seed)");
  app.add_option("--out", out, "write the report here instead of stdout");
  app.add_option("--format", format, "csv | table")->check(CLI::IsMember({"csv", "table"}));
  app.add_flag("--full-precision", full_precision, "print floats with 17 significant digits");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : decoy::cli::kExitConfig;
  }

  decoy::cli::RunConfig config;
  try {
    json doc = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("--config", "cannot open " + config_path);
      std::stringstream buf;
      buf << in.rdbuf();
      try {
        doc = json::parse(buf.str());
      } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("malformed JSON: ") + e.what());
      }
      if (!doc.is_object()) throw ConfigError("$", "config must be a JSON object");
    } else if (mode.empty()) {
      throw ConfigError("--config", "give --config or --mode");
    }
    json& run = doc["run"];
    if (!run.is_object()) run = json::object();
    if (!mode.empty()) run["mode"] = mode;
    if (*seed_opt) run["seed"] = seed;
    if (!out.empty()) run["out"] = out;
    if (!format.empty()) run["format"] = format;
    if (full_precision) run["full_precision"] = true;
    config = decoy::cli::parse_config(doc);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return decoy::cli::kExitConfig;
  }

  if (config.out.empty()) return decoy::cli::run(config, std::cout, std::cerr);
  std::ofstream file(config.out);
  if (!file) {
    std::cerr << "config error: run.out: cannot write " << config.out << '\n';
    return decoy::cli::kExitConfig;
  }
  return decoy::cli::run(config, file, std::cerr);
}
