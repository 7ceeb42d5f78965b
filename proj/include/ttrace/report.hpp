#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ttrace/diagnostics.hpp"
#include "ttrace/jacobi.hpp"

namespace ttrace {

struct IterationRow {
  int iteration = 0;
  double alpha = 0.0;  // value stored in T (zero in the chiral modes)
  double beta = 0.0;   // beta_i
  double estimate = std::numeric_limits<double>::quiet_NaN();
  double rel_change = std::numeric_limits<double>::quiet_NaN();
  Index max_bond = 0;
  double multiply_residual = 0.0;
  double add_residual = 0.0;
  double wall_ms = 0.0;
  std::optional<DiagnosticsRecord> diagnostics;
};

enum class StopReason : std::uint8_t { Breakdown, RelChange, IterationCap };

struct QuadratureReport {
  LanczosMode mode = LanczosMode::Vanilla;
  std::string function_desc;
  JacobiMatrix jacobi;
  std::vector<IterationRow> rows;
  std::vector<double> estimates;
  double estimate = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool breakdown = false;
  StopReason stop_reason = StopReason::IterationCap;
  double max_abs_alpha = 0.0;  // largest monitored |alpha_i|
  std::vector<std::string> warnings;
  std::string witness;  // chiral witness labels when Auto resolved to one

  /// Fixed-order CSV: iter,alpha,beta,estimate,rel_change,max_bond,
  /// trace_resid,commute_resid,alpha_warn,wall_ms. Monitor columns are
  /// empty on iterations where the monitor did not run.
  void write_csv(std::ostream& os) const;
  void write_summary(std::ostream& os) const;
};

}  // namespace ttrace
