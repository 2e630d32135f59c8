#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
  using namespace fcsd::cli;

  CLI::App app{"Fog-computing offloading experiments for drone swarms"};
  std::string config_path;
  std::optional<std::string> experiment;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> out_dir;
  bool trace = false;

  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--experiment", experiment,
                 "latency|reliability|energy-surface|energy-compare|solve-one");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--trials", trials, "Monte-Carlo trials");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--trace", trace, "write the per-generation GA trace (trace.csv)");
  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = parse_config(config_path);
    if (experiment) cfg.experiment = parse_experiment(*experiment);
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    if (out_dir) cfg.out_dir = *out_dir;
    if (trace) cfg.trace = true;
    validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "fcsd: config error: " << e.what() << '\n';
    return 2;
  }
  return run(cfg, std::cerr);
}
