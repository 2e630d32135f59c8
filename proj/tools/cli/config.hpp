#pragma once

// Run configuration for the fcsd tool.
//
// File format: one `key = value` per line, `#` starts a comment, blank lines
// are ignored. Lists are comma separated, booleans are true/false. Keys that
// are not given keep their defaults (the reference parameter set).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fcsd/harness.hpp"

namespace fcsd::cli {

enum class Experiment { Latency, Reliability, EnergySurface, EnergyCompare, SolveOne };

std::string_view experiment_name(Experiment e) noexcept;
/// Throws ConfigError (kind Range, key "experiment") for unknown names.
Experiment parse_experiment(std::string_view name);

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { MissingFile, Syntax, UnknownKey, Range };

  ConfigError(Kind kind, std::string key, const std::string& message);

  Kind kind() const noexcept { return kind_; }
  const std::string& key() const noexcept { return key_; }

 private:
  Kind kind_;
  std::string key_;
};

struct RunConfig {
  Experiment experiment = Experiment::Latency;
  std::uint64_t seed = 0;
  int trials = 3000;
  int threads = 0;
  std::string out_dir = "out";
  bool trace = false;

  // dist.cloud is ignored; the cloud comes from `cloud` and `cloud_spec`.
  ScenarioDistribution dist;
  bool cloud = true;
  CloudSpec cloud_spec;
  TaskSpec task;
  GaConfig ga;
  int chunks = kDefaultChunks;

  std::vector<double> d0_sweep_mb{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  std::vector<double> t0_sweep_s{2.0, 2.1, 2.2, 2.3, 2.4, 2.5, 2.6, 2.7, 2.8, 2.9};
  std::vector<double> r0_sweep{0.90, 0.91, 0.92, 0.93, 0.94, 0.95, 0.96, 0.97, 0.98, 0.99};
  std::vector<Algorithm> algorithms = all_algorithms();

  ExperimentOptions experiment_options() const;
  /// The scenario distribution with the run seed and cloud settings applied.
  ScenarioDistribution seeded_distribution() const;
};

/// Parses config text. `origin` names the source in diagnostics.
RunConfig parse_config_text(std::string_view text, std::string_view origin = "<config>");
/// Reads and parses a config file. Throws ConfigError (MissingFile) when the
/// file cannot be opened.
RunConfig parse_config(const std::string& path);

/// Range checks; throws ConfigError (Range) naming the offending key.
void validate(const RunConfig& cfg);

/// Canonical text form: every key, fixed order, values that parse back to
/// the same numbers.
std::string serialize(const RunConfig& cfg);

/// All recognised keys in canonical order.
const std::vector<std::string>& config_keys();

}  // namespace fcsd::cli
