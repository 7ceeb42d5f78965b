#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ttrace/config.hpp"
#include "ttrace/report.hpp"
#include "ttrace/spin.hpp"

namespace ttrace {

/// Mode resolution: Auto becomes ChiralFast exactly when a verified chiral
/// witness exists, and Vanilla otherwise (with the reason noted).
struct ResolvedMode {
  LanczosMode mode = LanczosMode::Vanilla;
  std::optional<PauliString> witness;
  std::string note;
};
ResolvedMode resolve_mode(LanczosMode requested, const InteractionSpec& spec);

/// Full run per config; throws on errors (config_error, numerical_error).
QuadratureReport run_experiment(const ExperimentConfig& config);

/// One benchmark grid point: fixed-iteration run with monitors off.
/// Mean/min per-iteration wall times exclude the first (warm-up) iteration.
struct BenchPoint {
  LanczosMode mode = LanczosMode::Vanilla;
  Index length = 0;
  Index max_bond = 0;
  int repetition = 0;
  int iterations = 0;
  double mean_iter_ms = 0.0;
  double min_iter_ms = 0.0;
  double total_s = 0.0;
  double estimate = 0.0;
};
BenchPoint bench_point(const ExperimentConfig& config, LanczosMode mode, Index length,
                       Index max_bond, int repetition);
std::string bench_csv_header();
std::string bench_csv_row(const BenchPoint& p);

/// CLI entry points. Exit codes: 0 success, 1 configuration error,
/// 2 numerical failure.
int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_diagnose(const ExperimentConfig& config, const std::string& checkpoint_dir,
                 std::ostream& out, std::ostream& err);
int cmd_oracle(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ttrace
