#pragma once

// Scenario sampling and Monte-Carlo experiment drivers.
//
// Seeding: the distribution's master seed and a trial index determine one
// trial seed, from which the scenario, the GA and the random baseline draw
// their own streams. The same trial sees the same scenario at every sweep
// point, and results do not depend on the number of worker threads.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcsd/baselines.hpp"
#include "fcsd/model.hpp"
#include "fcsd/solver.hpp"

namespace fcsd {

struct Range {
  double low = 0.0;
  double high = 0.0;
};

/// Random scenario generator. Defaults reproduce the reference parameter set:
/// CPU frequencies U[0.2, 0.9] GHz, node and link failure rates U[0.001, 0.3],
/// fog nodes uniform in a 100 m cube centred on the initiator at the origin.
struct ScenarioDistribution {
  int p = 10;
  Range freq_hz{0.2e9, 0.9e9};
  Range fail_rate{0.001, 0.3};
  Range link_fail_rate{0.001, 0.3};
  double placement_cube_m = 100.0;
  ChannelModel channel;
  CpuPowerModel cpu_power;
  std::optional<CloudSpec> cloud = CloudSpec{};
  // Rayleigh |h| per link; unit gain when false.
  bool rayleigh_fading = true;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

Scenario sample_scenario(const ScenarioDistribution& dist, Rng& rng);

/// SplitMix64 finalizer over (seed, stream); used to derive independent seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seed of trial `trial` under master seed `master`.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept;

/// The scenario a given trial sees.
Scenario trial_scenario(const ScenarioDistribution& dist, std::uint64_t trial);

enum class Algorithm { Lrga, Random, Wrr, MaxMin, MinMin };

std::string_view algorithm_name(Algorithm a) noexcept;
/// Accepts lrga, random, wrr, maxmin, minmin. Throws std::invalid_argument.
Algorithm parse_algorithm(std::string_view name);
const std::vector<Algorithm>& all_algorithms();

struct ExperimentOptions {
  int trials = 3000;
  int threads = 0;  // 0: hardware concurrency
  GaConfig ga;
  int chunks = kDefaultChunks;
};

/// Allocation chosen by `algorithm` for trial `trial` of the scenario.
/// The GA seed is taken from the trial seed, not from options.ga.
struct AllocationOutcome {
  Allocation allocation;
  Metrics metrics;
};
AllocationOutcome allocate(Algorithm algorithm, const Scenario& scn, const TaskSpec& task,
                           const ExperimentOptions& options, std::uint64_t trial_seed,
                           const SolveOptions& solve_options = {});

struct LatencyRow {
  double d0_mb = 0.0;
  double cloud_s = 0.0;
  double local_s = 0.0;
  double fog_s = 0.0;
  double fog_feasible_fraction = 0.0;
};

struct LatencyResult {
  int trials = 0;
  std::vector<LatencyRow> rows;
};

struct TrialRecord {
  int trial = 0;
  std::size_t sweep_index = 0;
  Algorithm algorithm = Algorithm::Lrga;
  Allocation allocation;
  Metrics metrics;
};

/// Per (D0, algorithm) means. LRGA outcomes that are infeasible are left out
/// of the means (they are still counted in feasible_fraction); baseline
/// allocations are averaged over every trial.
struct AlgorithmRow {
  double d0_mb = 0.0;
  Algorithm algorithm = Algorithm::Lrga;
  double mean_reliability = 0.0;
  double mean_energy_j = 0.0;
  double feasible_fraction = 0.0;
  int averaged_trials = 0;
};

struct AlgorithmSweepResult {
  int trials = 0;
  std::vector<AlgorithmRow> rows;      // d0-major, algorithm-minor
  std::vector<TrialRecord> records;    // empty unless requested
};

struct SurfaceRow {
  double t0_s = 0.0;
  double r0 = 0.0;
  double mean_energy_j = 0.0;  // NaN when no trial was feasible
  double feasible_fraction = 0.0;
};

/// Energy over a (T0, R0) grid. energies[trial][cell] is NaN for infeasible
/// outcomes; cells are t0-major.
struct SurfaceResult {
  int trials = 0;
  std::vector<double> t0_sweep;
  std::vector<double> r0_sweep;
  std::vector<SurfaceRow> rows;
  std::vector<std::vector<double>> energies;
};

/// Cloud, local-only and fog (LRGA allocation) latency, averaged over all trials.
LatencyResult run_latency_comparison(const ScenarioDistribution& dist, const TaskSpec& task,
                                     const std::vector<double>& d0_sweep_mb,
                                     const ExperimentOptions& options);

/// Runs every algorithm at every D0 and aggregates reliability and energy.
AlgorithmSweepResult run_algorithm_sweep(const ScenarioDistribution& dist, const TaskSpec& task,
                                         const std::vector<double>& d0_sweep_mb,
                                         const std::vector<Algorithm>& algorithms,
                                         const ExperimentOptions& options,
                                         bool keep_records = false);

AlgorithmSweepResult run_reliability_study(const ScenarioDistribution& dist, const TaskSpec& task,
                                           const std::vector<double>& d0_sweep_mb,
                                           const std::vector<Algorithm>& algorithms,
                                           const ExperimentOptions& options);

AlgorithmSweepResult run_energy_comparison(const ScenarioDistribution& dist, const TaskSpec& task,
                                           const std::vector<double>& d0_sweep_mb,
                                           const std::vector<Algorithm>& algorithms,
                                           const ExperimentOptions& options);

/// LRGA energy over the (T0, R0) grid. Within a trial, cells are solved from
/// the tightest constraints outward and each GA run is seeded with the feasible
/// solutions of its tighter neighbours, so a trial's energy never rises when a
/// bound is relaxed.
SurfaceResult run_energy_surface(const ScenarioDistribution& dist, const TaskSpec& task,
                                 const std::vector<double>& t0_sweep_s,
                                 const std::vector<double>& r0_sweep,
                                 const ExperimentOptions& options);

/// Calls fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace fcsd
