#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace fcsd::cli {

/// Files one run produces, keyed by file name.
struct RunOutput {
  std::string csv_name;
  std::string csv;
  std::string manifest;   // re-runnable config with every resolved parameter
  std::string trace_csv;  // empty unless cfg.trace
};

/// Decimal with 12 significant digits, trailing zeros kept.
std::string format_number(double v);

/// Runs the configured experiment in memory. The convergence trace, when
/// requested, follows the GA on trial 0 at the first sweep point.
RunOutput execute(const RunConfig& cfg);

/// Runs and writes the outputs into cfg.out_dir. Returns a process exit code;
/// diagnostics go to `err`.
int run(const RunConfig& cfg, std::ostream& err);

}  // namespace fcsd::cli
