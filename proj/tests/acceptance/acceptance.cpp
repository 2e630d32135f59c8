// Acceptance checks. Prints one PASS/FAIL line per criterion followed by the
// measured values; exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "config.hpp"
#include "fcsd/harness.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "runner.hpp"

namespace {

using namespace fcsd;

// Thresholds and sizes.
constexpr int kMonteCarloTrials = 3000;
constexpr double kLatencyD0Mb = 0.5;
constexpr double kMinCloudImprovement = 0.85;
constexpr double kMinLocalImprovement = 0.75;
const std::vector<double> kReliabilitySweepMb{0.2, 0.3, 0.4, 0.5, 0.6};
constexpr double kMinLrgaReliability = 0.995;
constexpr double kMinReliabilityGap = 0.3;
constexpr double kEnergyD0Mb = 0.5;
constexpr double kMinEnergyImprovement = 0.25;
constexpr int kSurfaceTrials = 100;
constexpr int kOracleInstances = 20;
constexpr double kOracleRatio = 1.05;
constexpr double kOracleStep = 0.01;
constexpr double kOracleD0Mb = 0.1;
constexpr int kPenaltySeeds = 10;
constexpr double kModelRelTol = 1e-9;
constexpr double kPropertyRelTol = 1e-12;
constexpr int kPropertyCases = 10000;
constexpr int kDeterminismTrials = 5;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void note(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    notes.emplace_back(buf);
  }
  void check(bool ok, const char* fmt, auto... args) {
    if (!ok) pass = false;
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    notes.emplace_back(std::string(ok ? "ok   " : "MISS ") + buf);
  }
};

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

double mean_over_trials(int trials, const std::function<double(const Scenario&)>& f,
                        const ScenarioDistribution& dist) {
  double sum = 0.0;
  for (int i = 0; i < trials; ++i) sum += f(trial_scenario(dist, static_cast<std::uint64_t>(i)));
  return sum / trials;
}

ExperimentOptions full_options() {
  ExperimentOptions o;
  o.trials = kMonteCarloTrials;
  return o;
}

// C1 -----------------------------------------------------------------------
Outcome latency_ordering() {
  Outcome out;
  const ScenarioDistribution dist;
  const TaskSpec task;
  const LatencyResult r = run_latency_comparison(dist, task, {kLatencyD0Mb}, full_options());
  const LatencyRow& row = r.rows.front();
  const double vs_cloud = 1.0 - row.fog_s / row.cloud_s;
  const double vs_local = 1.0 - row.fog_s / row.local_s;
  out.check(vs_cloud >= kMinCloudImprovement, "fog vs cloud improvement %.4f (need >= %.2f)",
            vs_cloud, kMinCloudImprovement);
  out.check(vs_local >= kMinLocalImprovement, "fog vs local improvement %.4f (need >= %.2f)",
            vs_local, kMinLocalImprovement);
  out.note("means over %d trials: cloud %.6f s, local %.6f s, fog %.6f s; LRGA feasible in %.4f",
           r.trials, row.cloud_s, row.local_s, row.fog_s, row.fog_feasible_fraction);

  const TaskSpec t = task.with_data_size(kLatencyD0Mb * kBitsPerMegabyte);
  const double best_fog = mean_over_trials(
      kMonteCarloTrials, [&](const Scenario& s) { return oracle::min_latency(s, t); }, dist);
  out.note("bound: latency-optimal allocation (any allocation, constraints ignored) has mean "
           "%.6f s -> at most %.4f vs cloud, %.4f vs local",
           best_fog, 1.0 - best_fog / row.cloud_s, 1.0 - best_fog / row.local_s);
  return out;
}

// C2 / C3 share one sweep ----------------------------------------------------
struct SweepData {
  AlgorithmSweepResult result;
  std::vector<double> sweep;
};

const SweepData& algorithm_sweep() {
  static const SweepData data = [] {
    SweepData d;
    d.sweep = kReliabilitySweepMb;
    if (std::find(d.sweep.begin(), d.sweep.end(), kEnergyD0Mb) == d.sweep.end()) {
      d.sweep.push_back(kEnergyD0Mb);
    }
    d.result = run_algorithm_sweep(ScenarioDistribution{}, TaskSpec{}, d.sweep, all_algorithms(),
                                   full_options(), true);
    return d;
  }();
  return data;
}

const AlgorithmRow& row_at(const SweepData& d, double mb, Algorithm a) {
  for (const AlgorithmRow& row : d.result.rows) {
    if (row.d0_mb == mb && row.algorithm == a) return row;
  }
  throw std::logic_error("missing sweep row");
}

double lrga_mean_all_trials(const SweepData& d, double mb, bool energy) {
  double sum = 0.0;
  int n = 0;
  for (const TrialRecord& rec : d.result.records) {
    if (rec.algorithm != Algorithm::Lrga || d.sweep[rec.sweep_index] != mb) continue;
    sum += energy ? rec.metrics.e_total_j : rec.metrics.r_total;
    ++n;
  }
  return sum / n;
}

Outcome reliability_plateau() {
  Outcome out;
  const SweepData& d = algorithm_sweep();
  const ScenarioDistribution dist;
  for (double mb : kReliabilitySweepMb) {
    const AlgorithmRow& lrga = row_at(d, mb, Algorithm::Lrga);
    out.check(lrga.mean_reliability >= kMinLrgaReliability,
              "D0 %.1f MB: LRGA mean reliability %.6f over %d feasible trials (need >= %.3f)", mb,
              lrga.mean_reliability, lrga.averaged_trials, kMinLrgaReliability);
    const TaskSpec t = TaskSpec{}.with_data_size(mb * kBitsPerMegabyte);
    int reach_r0 = 0, reach_plateau = 0;
    double best_sum = 0.0;
    for (int i = 0; i < kMonteCarloTrials; ++i) {
      const double best = oracle::max_reliability(trial_scenario(dist, static_cast<std::uint64_t>(i)), t);
      best_sum += best;
      reach_r0 += best >= t.reliability_bound ? 1 : 0;
      reach_plateau += best >= kMinLrgaReliability ? 1 : 0;
    }
    out.note("  bound at %.1f MB: most reliable allocation (latency ignored) has mean %.4f; "
             "R>=%.2f reachable in %d trials, R>=%.3f in %d; LRGA feasible fraction %.4f, "
             "LRGA mean over all trials %.4f",
             mb, best_sum / kMonteCarloTrials, t.reliability_bound, reach_r0, kMinLrgaReliability,
             reach_plateau, lrga.feasible_fraction, lrga_mean_all_trials(d, mb, false));
  }
  const double top = kReliabilitySweepMb.back();
  const double lrga_r = row_at(d, top, Algorithm::Lrga).mean_reliability;
  for (Algorithm a : all_algorithms()) {
    if (a == Algorithm::Lrga) continue;
    const double r = row_at(d, top, a).mean_reliability;
    out.check(lrga_r - r >= kMinReliabilityGap,
              "D0 %.1f MB: %s mean reliability %.4f, gap to LRGA %.4f (need >= %.1f)", top,
              std::string(algorithm_name(a)).c_str(), r, lrga_r - r, kMinReliabilityGap);
  }
  return out;
}

Outcome energy_dominance() {
  Outcome out;
  const SweepData& d = algorithm_sweep();
  const AlgorithmRow& lrga = row_at(d, kEnergyD0Mb, Algorithm::Lrga);
  for (Algorithm a : all_algorithms()) {
    if (a == Algorithm::Lrga) continue;
    const double e = row_at(d, kEnergyD0Mb, a).mean_energy_j;
    const double gain = 1.0 - lrga.mean_energy_j / e;
    out.check(gain >= kMinEnergyImprovement,
              "D0 %.1f MB: %s mean energy %.6f J, LRGA %.6f J, improvement %.4f (need >= %.2f)",
              kEnergyD0Mb, std::string(algorithm_name(a)).c_str(), e, lrga.mean_energy_j, gain,
              kMinEnergyImprovement);
  }
  out.note("LRGA feasible in %d of %d trials at %.1f MB; LRGA mean energy over all trials "
           "(infeasible outcomes included) %.6f J",
           lrga.averaged_trials, d.result.trials, kEnergyD0Mb,
           lrga_mean_all_trials(d, kEnergyD0Mb, true));
  return out;
}

// C4 -----------------------------------------------------------------------
Outcome surface_monotonicity() {
  Outcome out;
  cli::RunConfig defaults;
  const std::vector<double>& t0 = defaults.t0_sweep_s;
  const std::vector<double>& r0 = defaults.r0_sweep;
  ExperimentOptions o;
  o.trials = kSurfaceTrials;
  const SurfaceResult r = run_energy_surface(ScenarioDistribution{}, TaskSpec{}, t0, r0, o);
  const std::size_t nr = r0.size();
  int pairs = 0, violations = 0, feasible_cells = 0;
  for (const auto& trial : r.energies) {
    for (std::size_t ti = 0; ti < t0.size(); ++ti) {
      for (std::size_t ri = 0; ri < nr; ++ri) {
        const double e = trial[ti * nr + ri];
        if (std::isnan(e)) continue;
        ++feasible_cells;
        // Looser neighbours: larger T0, smaller R0.
        if (ti + 1 < t0.size()) {
          const double looser = trial[(ti + 1) * nr + ri];
          ++pairs;
          if (!(looser <= e)) ++violations;
        }
        if (ri > 0) {
          const double looser = trial[ti * nr + ri - 1];
          ++pairs;
          if (!(looser <= e)) ++violations;
        }
      }
    }
  }
  out.check(violations == 0 && pairs > 0,
            "%d paired per-trial comparisons, %d where relaxing a bound raised the energy",
            pairs, violations);
  int mean_inversions = 0;
  for (std::size_t ti = 0; ti + 1 < t0.size(); ++ti) {
    for (std::size_t ri = 0; ri < nr; ++ri) {
      if (r.rows[(ti + 1) * nr + ri].mean_energy_j > r.rows[ti * nr + ri].mean_energy_j) {
        ++mean_inversions;
      }
    }
  }
  out.note("%d feasible (trial, cell) pairs of %zu; feasible fraction at (%.1f s, %.2f) %.3f, at "
           "(%.1f s, %.2f) %.3f; %d cell-mean inversions along T0 (means over differing trial "
           "sets)",
           feasible_cells, r.energies.size() * t0.size() * nr, t0.front(), r0.back(),
           r.rows[nr - 1].feasible_fraction, t0.back(), r0.front(),
           r.rows[(t0.size() - 1) * nr].feasible_fraction, mean_inversions);
  return out;
}

// C5 -----------------------------------------------------------------------
Outcome oracle_equivalence() {
  Outcome out;
  ScenarioDistribution dist;
  dist.p = 2;
  const TaskSpec t = TaskSpec{}.with_data_size(kOracleD0Mb * kBitsPerMegabyte);
  int found = 0, worse = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t i = 0; found < kOracleInstances && i < 5000; ++i) {
    const Scenario s = trial_scenario(dist, i);
    const oracle::GridResult grid = oracle::grid_min_energy_p2(s, t, kOracleStep);
    if (!grid.found) continue;
    ++found;
    GaConfig cfg;
    cfg.rng_seed = derive_seed(i, 99);
    const auto start = std::chrono::steady_clock::now();
    const SolveResult r = solve(s, t, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double ratio = r.metrics.feasible ? r.metrics.e_total_j / grid.energy
                                            : std::numeric_limits<double>::infinity();
    worst_ratio = std::max(worst_ratio, ratio);
    if (!(ratio <= kOracleRatio)) {
      ++worse;
      GaConfig longer = cfg;
      longer.generations = 10 * cfg.generations;
      const SolveResult lr = solve(s, t, longer);
      out.note("instance %llu: ratio %.4f, GA rho %.3f lambda1 %.3f vs grid rho %.2f lambda1 %.2f;"
               " %d generations reach ratio %.4f",
               static_cast<unsigned long long>(i), ratio, r.allocation.rho,
               r.allocation.lambda[0], grid.rho, grid.lambda1, longer.generations,
               lr.metrics.feasible ? lr.metrics.e_total_j / grid.energy
                                   : std::numeric_limits<double>::infinity());
    }
    if (found <= 3) {
      out.note("instance %llu: GA %.6f J (%.3f s), grid %.6f J at rho %.2f lambda1 %.2f",
               static_cast<unsigned long long>(i), r.metrics.e_total_j, secs, grid.energy,
               grid.rho, grid.lambda1);
    }
  }
  out.check(found >= kOracleInstances && worse == 0,
            "%d grid-feasible p=2 instances, %d above %.2fx the grid minimum, worst ratio %.6f",
            found, worse, kOracleRatio, worst_ratio);
  return out;
}

// C6 -----------------------------------------------------------------------
Outcome penalty_invariants() {
  Outcome out;
  ScenarioDistribution dist;
  const TaskSpec t = TaskSpec{}.with_data_size(0.1 * kBitsPerMegabyte);
  long generations = 0, mixed = 0, failures = 0;
  for (int seed = 0; seed < kPenaltySeeds; ++seed) {
    const Scenario s = trial_scenario(dist, static_cast<std::uint64_t>(seed));
    GaConfig cfg;
    cfg.rng_seed = static_cast<std::uint64_t>(seed);
    double prev_wor = -std::numeric_limits<double>::infinity();
    double prev_best = std::numeric_limits<double>::infinity();
    double prev_gen_min = std::numeric_limits<double>::infinity();
    SolveOptions so;
    so.observer = [&](const GenerationReport& r) {
      ++generations;
      double max_feasible = -std::numeric_limits<double>::infinity();
      double min_infeasible = std::numeric_limits<double>::infinity();
      double gen_min = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < r.fitness.size(); ++i) {
        gen_min = std::min(gen_min, r.fitness[i]);
        if (r.appraisals[i].feasible) {
          max_feasible = std::max(max_feasible, r.fitness[i]);
          if (r.fitness[i] != r.appraisals[i].energy) ++failures;
        } else {
          min_infeasible = std::min(min_infeasible, r.fitness[i]);
        }
      }
      if (std::isfinite(max_feasible) && std::isfinite(min_infeasible)) {
        ++mixed;
        if (!(max_feasible < min_infeasible)) ++failures;
        if (!(max_feasible <= r.worst_feasible && r.worst_feasible <= min_infeasible)) ++failures;
      }
      if (r.worst_feasible < prev_wor) ++failures;
      if (r.best_fitness > prev_best) ++failures;
      if (gen_min > prev_gen_min) ++failures;
      if (static_cast<int>(r.population.size()) != cfg.pop_size) ++failures;
      prev_wor = r.worst_feasible;
      prev_best = r.best_fitness;
      prev_gen_min = gen_min;
    };
    solve(s, t, cfg, so);
  }
  out.check(failures == 0 && generations == kPenaltySeeds * GaConfig{}.generations,
            "%ld generations over %d seeds (%ld with feasible and infeasible individuals), %ld "
            "assertion failures",
            generations, kPenaltySeeds, mixed, failures);
  return out;
}

// C7 -----------------------------------------------------------------------
Outcome model_checks() {
  Outcome out;
  using testing::line_scenario;
  using testing::task_mb;
  const ChannelModel ch;
  const TaskSpec mb1 = task_mb(1.0);
  struct Example {
    const char* name;
    double got, want;
  };
  const Scenario local = line_scenario(0.5e9, {0.4e9}, 0.05);
  const Scenario cloud = line_scenario(0.5e9, {0.4e9}, 0.0, 0.0, 10.0, CloudSpec{});
  const std::vector<Example> examples{
      {"distance to (100,100,100)", distance({0, 0, 0}, {100, 100, 100}), 173.20508075688772},
      {"uplink rate at 100 m", uplink_rate(ch, 100.0, 1.0), 23584628.701110374},
      {"local latency rho=1", local_latency(mb1, 0.5e9, 1.0), 3.8},
      {"upload latency", upload_latency(mb1, ch, 23584628.701110374, 0.0, 0.1),
       0.03392039832971107},
      {"compute latency", compute_latency(mb1, 0.9e9, 0.0, 0.1), 0.2111111111111111},
      {"all-local energy", total_energy(local, mb1, Allocation{1.0, {0.0}}), 5.9375},
      {"all-local reliability", total_reliability(local, mb1, Allocation{1.0, {0.0}}),
       std::exp(-0.05 * 3.8)},
      {"cloud latency at 0.5 MB", cloud_latency(cloud, task_mb(0.5)), 1.19253713484997},
  };
  int bad_examples = 0;
  for (const Example& e : examples) {
    if (!rel_close(e.got, e.want, kModelRelTol)) {
      ++bad_examples;
      out.note("example %s: got %.15g want %.15g", e.name, e.got, e.want);
    }
  }
  out.check(bad_examples == 0, "%zu hand-evaluated examples, %d outside %.0e relative",
            examples.size(), bad_examples, kModelRelTol);

  Rng rng(7);
  int linear_bad = 0, additive_bad = 0, oracle_bad = 0;
  for (int k = 0; k < kPropertyCases; ++k) {
    const Scenario s = testing::random_scenario(900000 + static_cast<std::uint64_t>(k));
    const double mb = 0.05 + 0.55 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const Allocation a = testing::random_allocation(s.size(), rng);
    const BranchTimes one = branch_times(s, task_mb(mb), a);
    const BranchTimes two = branch_times(s, task_mb(2.0 * mb), a);
    bool lin = rel_close(two.local_s, 2.0 * one.local_s, kPropertyRelTol);
    for (std::size_t i = 0; i < s.size(); ++i) {
      lin = lin && rel_close(two.upload_s[i], 2.0 * one.upload_s[i], kPropertyRelTol) &&
            rel_close(two.compute_s[i], 2.0 * one.compute_s[i], kPropertyRelTol);
    }
    const Metrics m1 = evaluate(s, task_mb(mb), a);
    const Metrics m2 = evaluate(s, task_mb(2.0 * mb), a);
    lin = lin && rel_close(m2.e_total_j, 2.0 * m1.e_total_j, kPropertyRelTol);
    linear_bad += lin ? 0 : 1;

    const oracle::Terms x = oracle::terms(s, task_mb(mb), a.rho, a.lambda);
    additive_bad += rel_close(m1.e_total_j, oracle::energy(x), kPropertyRelTol) ? 0 : 1;
    oracle_bad += rel_close(m1.t_total_s, oracle::latency(x), kPropertyRelTol) &&
                          rel_close(m1.r_total, oracle::reliability(x), kPropertyRelTol)
                      ? 0
                      : 1;
  }
  out.check(linear_bad == 0, "linearity in D0 on %d random inputs: %d failures", kPropertyCases,
            linear_bad);
  out.check(additive_bad == 0, "energy additivity on %d random inputs: %d failures",
            kPropertyCases, additive_bad);
  out.check(oracle_bad == 0, "latency/reliability recomputation on %d inputs: %d failures",
            kPropertyCases, oracle_bad);
  return out;
}

// C8 -----------------------------------------------------------------------
Outcome determinism() {
  Outcome out;
  for (cli::Experiment e : {cli::Experiment::Latency, cli::Experiment::Reliability,
                            cli::Experiment::EnergySurface, cli::Experiment::EnergyCompare,
                            cli::Experiment::SolveOne}) {
    cli::RunConfig cfg;
    cfg.experiment = e;
    cfg.trials = kDeterminismTrials;
    cfg.seed = 12345;
    cfg.trace = true;
    const cli::RunOutput a = cli::execute(cfg);
    cfg.threads = 1;
    const cli::RunOutput b = cli::execute(cfg);
    const bool same = a.csv == b.csv && a.trace_csv == b.trace_csv;
    out.check(same, "%s: %zu CSV bytes, rerun (and single-threaded rerun) byte-identical: %s",
              std::string(cli::experiment_name(e)).c_str(), a.csv.size(), same ? "yes" : "no");
  }
  return out;
}

}  // namespace

// Optional arguments select criteria by id, e.g. `fcsd_acceptance C5 C7`.
int main(int argc, char** argv) {
  const std::vector<std::string> only(argv + 1, argv + argc);
  struct Criterion {
    const char* id;
    const char* title;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"C1", "latency architecture ordering at 0.5 MB", latency_ordering},
      {"C2", "LRGA reliability plateau and baseline gap", reliability_plateau},
      {"C3", "LRGA energy dominance at 0.5 MB", energy_dominance},
      {"C4", "energy surface monotonicity (paired trials)", surface_monotonicity},
      {"C5", "GA within 5% of grid oracle on p=2", oracle_equivalence},
      {"C6", "penalty invariants over 10 seeds", penalty_invariants},
      {"C7", "model hand values and properties", model_checks},
      {"C8", "byte-identical reruns", determinism},
  };
  int failed = 0, ran = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s  %s  (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs);
    for (const std::string& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
