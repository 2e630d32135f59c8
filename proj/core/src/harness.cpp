#include "fcsd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace fcsd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum SeedStream : std::uint64_t { kScenarioStream = 0, kGaStream = 1, kRandomStream = 2 };

void check_range(const Range& r, const char* what) {
  if (!(r.low <= r.high) || !std::isfinite(r.low) || !std::isfinite(r.high)) {
    throw std::invalid_argument(std::string(what) + ": low must be <= high");
  }
}

double draw(const Range& r, Rng& rng) {
  return r.low + (r.high - r.low) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

void check_sweep(const std::vector<double>& sweep, const char* what) {
  if (sweep.empty()) throw std::invalid_argument(std::string(what) + " is empty");
}

void check_trials(const ExperimentOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("trials must be >= 1");
}

}  // namespace

void ScenarioDistribution::validate() const {
  if (p < 0) throw std::invalid_argument("p must be >= 0");
  check_range(freq_hz, "freq_range");
  check_range(fail_rate, "fail_range");
  check_range(link_fail_rate, "link_fail_range");
  if (!(freq_hz.low > 0.0)) throw std::invalid_argument("freq_range must be positive");
  if (!(fail_rate.low >= 0.0)) throw std::invalid_argument("fail_range must be nonnegative");
  if (!(link_fail_rate.low >= 0.0)) {
    throw std::invalid_argument("link_fail_range must be nonnegative");
  }
  if (!(placement_cube_m > 0.0)) throw std::invalid_argument("placement_cube_m must be > 0");
  channel.validate();
  cpu_power.validate();
  if (cloud) cloud->validate();
}

Scenario sample_scenario(const ScenarioDistribution& dist, Rng& rng) {
  dist.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  DroneNode initiator;
  initiator.id = 0;
  initiator.cpu_freq_hz = draw(dist.freq_hz, rng);
  initiator.fail_rate = draw(dist.fail_rate, rng);

  const auto p = static_cast<std::size_t>(dist.p);
  std::vector<DroneNode> nodes;
  std::vector<double> fading;
  std::vector<double> link_fail;
  nodes.reserve(p);
  fading.reserve(p);
  link_fail.reserve(p);

  const double half = dist.placement_cube_m / 2.0;
  for (std::size_t i = 0; i < p; ++i) {
    DroneNode n;
    n.id = static_cast<int>(i) + 1;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 100000) {
        throw std::invalid_argument("placement cube does not intersect the communication radius");
      }
      n.position = Vec3{(unit(rng) * 2.0 - 1.0) * half, (unit(rng) * 2.0 - 1.0) * half,
                        (unit(rng) * 2.0 - 1.0) * half};
      if (distance(n.position, initiator.position) <= dist.channel.max_radius_m) break;
    }
    n.cpu_freq_hz = draw(dist.freq_hz, rng);
    n.fail_rate = draw(dist.fail_rate, rng);
    link_fail.push_back(draw(dist.link_fail_rate, rng));
    if (dist.rayleigh_fading) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      fading.push_back(std::sqrt((re * re + im * im) / 2.0));
    } else {
      fading.push_back(1.0);
    }
    nodes.push_back(n);
  }
  return Scenario(initiator, std::move(nodes), dist.channel, std::move(fading),
                  std::move(link_fail), dist.cloud, dist.cpu_power);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept {
  return derive_seed(derive_seed(master, 0x7472'6961'6cULL), trial);
}

Scenario trial_scenario(const ScenarioDistribution& dist, std::uint64_t trial) {
  Rng rng(derive_seed(trial_seed(dist.rng_seed, trial), kScenarioStream));
  return sample_scenario(dist, rng);
}

std::string_view algorithm_name(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::Lrga: return "lrga";
    case Algorithm::Random: return "random";
    case Algorithm::Wrr: return "wrr";
    case Algorithm::MaxMin: return "maxmin";
    case Algorithm::MinMin: return "minmin";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : all_algorithms()) {
    if (algorithm_name(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                              "' (expected lrga|random|wrr|maxmin|minmin)");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all{Algorithm::Lrga, Algorithm::Random, Algorithm::Wrr,
                                          Algorithm::MaxMin, Algorithm::MinMin};
  return all;
}

AllocationOutcome allocate(Algorithm algorithm, const Scenario& scn, const TaskSpec& task,
                           const ExperimentOptions& options, std::uint64_t seed,
                           const SolveOptions& solve_options) {
  AllocationOutcome out;
  switch (algorithm) {
    case Algorithm::Lrga: {
      GaConfig cfg = options.ga;
      cfg.rng_seed = derive_seed(seed, kGaStream);
      SolveResult r = solve(scn, task, cfg, solve_options);
      out.allocation = std::move(r.allocation);
      out.metrics = r.metrics;
      return out;
    }
    case Algorithm::Random: {
      Rng rng(derive_seed(seed, kRandomStream));
      out.allocation = random_alloc(scn, task, rng);
      break;
    }
    case Algorithm::Wrr:
      out.allocation = wrr_alloc(scn, task);
      break;
    case Algorithm::MaxMin:
      out.allocation = max_min_alloc(scn, task, options.chunks);
      break;
    case Algorithm::MinMin:
      out.allocation = min_min_alloc(scn, task, options.chunks);
      break;
  }
  out.metrics = evaluate(scn, task, out.allocation);
  return out;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

LatencyResult run_latency_comparison(const ScenarioDistribution& dist, const TaskSpec& task,
                                     const std::vector<double>& d0_sweep_mb,
                                     const ExperimentOptions& options) {
  check_sweep(d0_sweep_mb, "d0 sweep");
  check_trials(options);
  if (!dist.cloud) throw std::logic_error("latency comparison needs a cloud configuration");
  dist.validate();

  struct Sample {
    double cloud, local, fog;
    bool feasible;
  };
  const std::size_t points = d0_sweep_mb.size();
  std::vector<std::vector<Sample>> samples(static_cast<std::size_t>(options.trials));

  parallel_for(options.trials, options.threads, [&](int trial) {
    const Scenario scn = trial_scenario(dist, static_cast<std::uint64_t>(trial));
    const std::uint64_t seed = trial_seed(dist.rng_seed, static_cast<std::uint64_t>(trial));
    auto& row = samples[static_cast<std::size_t>(trial)];
    row.reserve(points);
    for (double mb : d0_sweep_mb) {
      const TaskSpec t = task.with_data_size(mb * kBitsPerMegabyte);
      const AllocationOutcome fog = allocate(Algorithm::Lrga, scn, t, options, seed);
      row.push_back(Sample{cloud_latency(scn, t), local_only_latency(scn, t),
                           fog.metrics.t_total_s, fog.metrics.feasible});
    }
  });

  LatencyResult result;
  result.trials = options.trials;
  for (std::size_t k = 0; k < points; ++k) {
    LatencyRow row;
    row.d0_mb = d0_sweep_mb[k];
    int feasible = 0;
    for (const auto& trial : samples) {
      row.cloud_s += trial[k].cloud;
      row.local_s += trial[k].local;
      row.fog_s += trial[k].fog;
      feasible += trial[k].feasible ? 1 : 0;
    }
    row.cloud_s /= options.trials;
    row.local_s /= options.trials;
    row.fog_s /= options.trials;
    row.fog_feasible_fraction = static_cast<double>(feasible) / options.trials;
    result.rows.push_back(row);
  }
  return result;
}

AlgorithmSweepResult run_algorithm_sweep(const ScenarioDistribution& dist, const TaskSpec& task,
                                         const std::vector<double>& d0_sweep_mb,
                                         const std::vector<Algorithm>& algorithms,
                                         const ExperimentOptions& options, bool keep_records) {
  check_sweep(d0_sweep_mb, "d0 sweep");
  check_trials(options);
  if (algorithms.empty()) throw std::invalid_argument("algorithm list is empty");
  dist.validate();

  const std::size_t points = d0_sweep_mb.size();
  const std::size_t algs = algorithms.size();
  // outcomes[trial][point * algs + a]
  std::vector<std::vector<AllocationOutcome>> outcomes(static_cast<std::size_t>(options.trials));

  parallel_for(options.trials, options.threads, [&](int trial) {
    const Scenario scn = trial_scenario(dist, static_cast<std::uint64_t>(trial));
    const std::uint64_t seed = trial_seed(dist.rng_seed, static_cast<std::uint64_t>(trial));
    auto& row = outcomes[static_cast<std::size_t>(trial)];
    row.reserve(points * algs);
    for (double mb : d0_sweep_mb) {
      const TaskSpec t = task.with_data_size(mb * kBitsPerMegabyte);
      for (Algorithm a : algorithms) row.push_back(allocate(a, scn, t, options, seed));
    }
  });

  AlgorithmSweepResult result;
  result.trials = options.trials;
  for (std::size_t k = 0; k < points; ++k) {
    for (std::size_t a = 0; a < algs; ++a) {
      const std::size_t cell = k * algs + a;
      const bool constrained = algorithms[a] == Algorithm::Lrga;
      AlgorithmRow row;
      row.d0_mb = d0_sweep_mb[k];
      row.algorithm = algorithms[a];
      int feasible = 0;
      for (const auto& trial : outcomes) {
        const Metrics& m = trial[cell].metrics;
        feasible += m.feasible ? 1 : 0;
        if (constrained && !m.feasible) continue;
        row.mean_reliability += m.r_total;
        row.mean_energy_j += m.e_total_j;
        ++row.averaged_trials;
      }
      if (row.averaged_trials > 0) {
        row.mean_reliability /= row.averaged_trials;
        row.mean_energy_j /= row.averaged_trials;
      } else {
        row.mean_reliability = kNaN;
        row.mean_energy_j = kNaN;
      }
      row.feasible_fraction = static_cast<double>(feasible) / options.trials;
      result.rows.push_back(row);
    }
  }

  if (keep_records) {
    result.records.reserve(static_cast<std::size_t>(options.trials) * points * algs);
    for (std::size_t trial = 0; trial < outcomes.size(); ++trial) {
      for (std::size_t k = 0; k < points; ++k) {
        for (std::size_t a = 0; a < algs; ++a) {
          AllocationOutcome& o = outcomes[trial][k * algs + a];
          result.records.push_back(TrialRecord{static_cast<int>(trial), k, algorithms[a],
                                               std::move(o.allocation), o.metrics});
        }
      }
    }
  }
  return result;
}

AlgorithmSweepResult run_reliability_study(const ScenarioDistribution& dist, const TaskSpec& task,
                                           const std::vector<double>& d0_sweep_mb,
                                           const std::vector<Algorithm>& algorithms,
                                           const ExperimentOptions& options) {
  return run_algorithm_sweep(dist, task, d0_sweep_mb, algorithms, options);
}

AlgorithmSweepResult run_energy_comparison(const ScenarioDistribution& dist, const TaskSpec& task,
                                           const std::vector<double>& d0_sweep_mb,
                                           const std::vector<Algorithm>& algorithms,
                                           const ExperimentOptions& options) {
  return run_algorithm_sweep(dist, task, d0_sweep_mb, algorithms, options);
}

SurfaceResult run_energy_surface(const ScenarioDistribution& dist, const TaskSpec& task,
                                 const std::vector<double>& t0_sweep_s,
                                 const std::vector<double>& r0_sweep,
                                 const ExperimentOptions& options) {
  check_sweep(t0_sweep_s, "t0 sweep");
  check_sweep(r0_sweep, "r0 sweep");
  check_trials(options);
  dist.validate();

  const std::size_t nt = t0_sweep_s.size();
  const std::size_t nr = r0_sweep.size();
  // Tightest first: ascending latency bound, descending reliability bound.
  std::vector<std::size_t> t_order(nt);
  std::vector<std::size_t> r_order(nr);
  std::iota(t_order.begin(), t_order.end(), std::size_t{0});
  std::iota(r_order.begin(), r_order.end(), std::size_t{0});
  std::stable_sort(t_order.begin(), t_order.end(),
                   [&](std::size_t a, std::size_t b) { return t0_sweep_s[a] < t0_sweep_s[b]; });
  std::stable_sort(r_order.begin(), r_order.end(),
                   [&](std::size_t a, std::size_t b) { return r0_sweep[a] > r0_sweep[b]; });

  SurfaceResult result;
  result.trials = options.trials;
  result.t0_sweep = t0_sweep_s;
  result.r0_sweep = r0_sweep;
  result.energies.assign(static_cast<std::size_t>(options.trials),
                         std::vector<double>(nt * nr, kNaN));

  parallel_for(options.trials, options.threads, [&](int trial) {
    const Scenario scn = trial_scenario(dist, static_cast<std::uint64_t>(trial));
    const std::uint64_t seed = trial_seed(dist.rng_seed, static_cast<std::uint64_t>(trial));
    // solved[ti][ri] in sorted coordinates
    std::vector<std::vector<std::optional<Allocation>>> solved(
        nt, std::vector<std::optional<Allocation>>(nr));
    auto& energies = result.energies[static_cast<std::size_t>(trial)];

    for (std::size_t ti = 0; ti < nt; ++ti) {
      for (std::size_t ri = 0; ri < nr; ++ri) {
        TaskSpec t = task;
        t.latency_bound_s = t0_sweep_s[t_order[ti]];
        t.reliability_bound = r0_sweep[r_order[ri]];
        SolveOptions so;
        if (ti > 0 && solved[ti - 1][ri]) so.seeds.push_back(*solved[ti - 1][ri]);
        if (ri > 0 && solved[ti][ri - 1]) so.seeds.push_back(*solved[ti][ri - 1]);
        AllocationOutcome o = allocate(Algorithm::Lrga, scn, t, options, seed, so);
        if (o.metrics.feasible) {
          energies[t_order[ti] * nr + r_order[ri]] = o.metrics.e_total_j;
          solved[ti][ri] = std::move(o.allocation);
        }
      }
    }
  });

  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t ri = 0; ri < nr; ++ri) {
      const std::size_t cell = ti * nr + ri;
      SurfaceRow row;
      row.t0_s = t0_sweep_s[ti];
      row.r0 = r0_sweep[ri];
      int feasible = 0;
      double sum = 0.0;
      for (const auto& trial : result.energies) {
        if (std::isnan(trial[cell])) continue;
        sum += trial[cell];
        ++feasible;
      }
      row.mean_energy_j = feasible > 0 ? sum / feasible : kNaN;
      row.feasible_fraction = static_cast<double>(feasible) / options.trials;
      result.rows.push_back(row);
    }
  }
  return result;
}

}  // namespace fcsd
