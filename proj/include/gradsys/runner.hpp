#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "gradsys/config.hpp"
#include "gradsys/schauder.hpp"

namespace gradsys {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDiverged = 2;

struct RunOptions {
  /// Overrides out_dir from the config.
  std::optional<std::string> out_dir;
  bool verbose = false;
  /// Progress and error messages; defaults to std::cerr.
  std::ostream* log = nullptr;
};

/// Columns: iter,grad_v_r,grad_u_p,rel_change_w11,res1,res2,in_E
void write_trace_csv(std::ostream& os, const IterationReport& report);

/// Run the experiment named by `kind` (fixed_point, bilaplacian,
/// thresholds, witness). Returns kExitDiverged when a solver run diverged,
/// kExitOk otherwise; throws on bad input.
int run_experiment(const Config& config, const RunOptions& options = {});

/// Verdict map over a (lambda, alpha) grid or a bisection on lambda, as set
/// in the [sweep] section. Returns kExitOk once every point is computed.
int run_sweep(const Config& config, const RunOptions& options = {});

/// "run" or "sweep" on a config file with every failure mapped to
/// kExitError and reported on the log stream.
int run_command(const std::string& command, const std::string& config_path, const RunOptions& options = {});

}  // namespace gradsys
