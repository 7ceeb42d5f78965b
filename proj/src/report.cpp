#include "ttrace/report.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace ttrace {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Breakdown: return "breakdown";
    case StopReason::RelChange: return "relative-change tolerance";
    case StopReason::IterationCap: return "iteration cap";
  }
  return "?";
}

}  // namespace

void QuadratureReport::write_csv(std::ostream& os) const {
  os << "iter,alpha,beta,estimate,rel_change,max_bond,trace_resid,commute_resid,"
        "alpha_warn,wall_ms\n";
  for (const auto& r : rows) {
    os << r.iteration << ',' << num(r.alpha) << ',' << num(r.beta) << ','
       << num(r.estimate) << ',' << num(r.rel_change) << ',' << r.max_bond << ',';
    if (r.diagnostics && r.diagnostics->trace)
      os << num(r.diagnostics->trace->normalized);
    os << ',';
    if (r.diagnostics && r.diagnostics->commutation)
      os << num(r.diagnostics->commutation->residual);
    os << ',';
    if (r.diagnostics && r.diagnostics->alpha_abs)
      os << (r.diagnostics->warnings.empty() ? 0 : 1);
    os << ',' << num(r.wall_ms) << '\n';
  }
}

void QuadratureReport::write_summary(std::ostream& os) const {
  os << "mode: " << mode_name(mode) << '\n';
  os << "function: " << function_desc << '\n';
  if (!witness.empty()) os << "witness: " << witness << '\n';
  os << "iterations: " << iterations << '\n';
  os << "stop: " << stop_reason_name(stop_reason) << '\n';
  os << "breakdown: " << (breakdown ? "yes" : "no") << '\n';
  os << "estimate: " << num(estimate) << '\n';
  os << "beta1: " << num(jacobi.beta1) << '\n';
  os << "max_abs_alpha: " << num(max_abs_alpha) << '\n';
  double max_mult = 0, max_add = 0;
  for (const auto& r : rows) {
    max_mult = std::max(max_mult, r.multiply_residual);
    max_add = std::max(max_add, r.add_residual);
  }
  os << "max_multiply_residual: " << num(max_mult) << '\n';
  os << "max_add_residual: " << num(max_add) << '\n';
  for (const auto& w : warnings) os << "warning: " << w << '\n';
}

}  // namespace ttrace
