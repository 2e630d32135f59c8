#include "runner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fcsd::cli {

namespace {

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string out;
  for (const std::string& c : cells) {
    if (!out.empty()) out += ',';
    out += c;
  }
  out += '\n';
  return out;
}

std::string trace_header() { return "generation,best_fitness,feasible_count,wor\n"; }

SolveOptions tracing(std::string* trace) {
  SolveOptions so;
  if (!trace) return so;
  so.observer = [trace](const GenerationReport& r) {
    const auto feasible = std::count_if(r.appraisals.begin(), r.appraisals.end(),
                                        [](const Appraisal& a) { return a.feasible; });
    *trace += csv_row({std::to_string(r.generation), format_number(r.best_fitness),
                       std::to_string(feasible), format_number(r.worst_feasible)});
  };
  return so;
}

TaskSpec task_at(const RunConfig& cfg, double d0_mb) {
  return cfg.task.with_data_size(d0_mb * kBitsPerMegabyte);
}

void trace_trial_zero(const RunConfig& cfg, const TaskSpec& task, std::string* trace) {
  if (!trace) return;
  const ScenarioDistribution dist = cfg.seeded_distribution();
  const Scenario scn = trial_scenario(dist, 0);
  allocate(Algorithm::Lrga, scn, task, cfg.experiment_options(), trial_seed(dist.rng_seed, 0),
           tracing(trace));
}

std::string latency_csv(const RunConfig& cfg) {
  const LatencyResult r = run_latency_comparison(cfg.seeded_distribution(), cfg.task,
                                                 cfg.d0_sweep_mb, cfg.experiment_options());
  std::string out = "d0_mb,cloud_s,local_s,fog_s\n";
  for (const LatencyRow& row : r.rows) {
    out += csv_row({format_number(row.d0_mb), format_number(row.cloud_s),
                    format_number(row.local_s), format_number(row.fog_s)});
  }
  return out;
}

std::string sweep_csv(const RunConfig& cfg, bool reliability) {
  const AlgorithmSweepResult r =
      run_algorithm_sweep(cfg.seeded_distribution(), cfg.task, cfg.d0_sweep_mb, cfg.algorithms,
                          cfg.experiment_options());
  std::string out = "d0_mb,algorithm,mean_value,feasible_fraction\n";
  for (const AlgorithmRow& row : r.rows) {
    out += csv_row({format_number(row.d0_mb), std::string(algorithm_name(row.algorithm)),
                    format_number(reliability ? row.mean_reliability : row.mean_energy_j),
                    format_number(row.feasible_fraction)});
  }
  return out;
}

std::string surface_csv(const RunConfig& cfg) {
  const SurfaceResult r = run_energy_surface(cfg.seeded_distribution(), cfg.task, cfg.t0_sweep_s,
                                             cfg.r0_sweep, cfg.experiment_options());
  std::string out = "t0_s,r0,mean_energy_j\n";
  for (const SurfaceRow& row : r.rows) {
    out += csv_row({format_number(row.t0_s), format_number(row.r0),
                    format_number(row.mean_energy_j)});
  }
  return out;
}

std::string solve_one_csv(const RunConfig& cfg, std::string* trace) {
  const ScenarioDistribution dist = cfg.seeded_distribution();
  const Scenario scn = trial_scenario(dist, 0);
  const AllocationOutcome o = allocate(Algorithm::Lrga, scn, cfg.task, cfg.experiment_options(),
                                       trial_seed(dist.rng_seed, 0), tracing(trace));
  std::string header = "rho";
  for (std::size_t i = 1; i <= scn.size(); ++i) header += ",lambda_" + std::to_string(i);
  header += ",t_total_s,r_total,e_total_j,feasible\n";

  std::string row = format_number(o.allocation.rho);
  for (double l : o.allocation.lambda) row += "," + format_number(l);
  row += "," + format_number(o.metrics.t_total_s) + "," + format_number(o.metrics.r_total) + "," +
         format_number(o.metrics.e_total_j) + "," + (o.metrics.feasible ? "true" : "false") + "\n";
  return header + row;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g", v);
  return buf;
}

RunOutput execute(const RunConfig& cfg) {
  validate(cfg);
  RunOutput out;
  out.csv_name = std::string(experiment_name(cfg.experiment)) + ".csv";
  out.manifest = "# fcsd run manifest; rerun with: fcsd --config <this file>\n" + serialize(cfg);

  std::string trace;
  std::string* tp = cfg.trace ? &trace : nullptr;
  if (tp) trace = trace_header();

  switch (cfg.experiment) {
    case Experiment::Latency:
      out.csv = latency_csv(cfg);
      trace_trial_zero(cfg, task_at(cfg, cfg.d0_sweep_mb.front()), tp);
      break;
    case Experiment::Reliability:
    case Experiment::EnergyCompare:
      out.csv = sweep_csv(cfg, cfg.experiment == Experiment::Reliability);
      trace_trial_zero(cfg, task_at(cfg, cfg.d0_sweep_mb.front()), tp);
      break;
    case Experiment::EnergySurface: {
      out.csv = surface_csv(cfg);
      TaskSpec t = cfg.task;
      t.latency_bound_s = cfg.t0_sweep_s.front();
      t.reliability_bound = cfg.r0_sweep.front();
      trace_trial_zero(cfg, t, tp);
      break;
    }
    case Experiment::SolveOne:
      out.csv = solve_one_csv(cfg, tp);
      break;
  }
  out.trace_csv = std::move(trace);
  return out;
}

int run(const RunConfig& cfg, std::ostream& err) {
  RunOutput out;
  try {
    out = execute(cfg);
  } catch (const ConfigError& e) {
    err << "fcsd: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "fcsd: run failed: " << e.what() << '\n';
    return 1;
  }

  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "fcsd: cannot create output directory '" << cfg.out_dir << "': " << ec.message()
        << '\n';
    return 1;
  }
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    f << body;
    f.close();
    if (!f) {
      err << "fcsd: cannot write '" << (dir / name).string() << "'\n";
      return false;
    }
    return true;
  };
  if (!write(out.csv_name, out.csv)) return 1;
  if (!write("manifest.cfg", out.manifest)) return 1;
  if (cfg.trace && !write("trace.csv", out.trace_csv)) return 1;
  return 0;
}

}  // namespace fcsd::cli
