#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>

#include "ttrace/compression.hpp"
#include "ttrace/diagnostics.hpp"
#include "ttrace/errors.hpp"
#include "ttrace/report.hpp"
#include "ttrace/spectral_function.hpp"
#include "ttrace/tensor_train.hpp"

namespace ttrace {

/// Working state of one run; only two basis operators are retained by the
/// three-term recurrence. Exposed to checkpoint sinks.
template <class S>
struct KrylovState {
  const TensorTrain<S>* u_prev = nullptr;  // U_{i-1}, null in the first step
  const TensorTrain<S>* u_curr = nullptr;  // U_i
  const TensorTrain<S>* v = nullptr;       // residual V_i
  const JacobiMatrix* jacobi = nullptr;
  int iteration = 0;
  const std::vector<double>* estimates = nullptr;
};

template <class S>
using CheckpointSink = std::function<void(const KrylovState<S>&)>;

template <class S>
struct RunHooks {
  MonitorSettings monitors;
  double hermiticity_tol = 1e-8;
  std::vector<TensorTrain<S>>* retained_basis = nullptr;  // debug-scale audits
  CheckpointSink<S> checkpoint;
  int checkpoint_every = 0;
};

/// Global Lanczos with Gauss quadrature, starting from the identity MPO.
///
/// Per iteration: beta_i = ||V_{i-1}||, breakdown when beta_i falls below
/// breakdown_tol * beta_1; U_i = V_{i-1}/beta_i; V_i = compress(A U_i) -
/// beta_i U_{i-1}. Vanilla then orthogonalizes against U_i with
/// alpha_i = <U_i, V_i>; ChiralSafe does the same but stores alpha_i = 0 in
/// T; ChiralFast skips the alpha work entirely (an optional monitor
/// evaluates it read-only). Each iteration assembles T_i and records the
/// quadrature estimate of Tr f(A).
///
/// Auto cannot be resolved here (witness construction needs the interaction
/// spec, see construct_chiral_unitary); it falls back to Vanilla with a
/// warning recorded.
template <class S>
QuadratureReport run_lanczos(const TensorTrain<S>& A, const SpectralFunction& f,
                             LanczosMode mode, const CompressionSettings& settings,
                             const StoppingCriteria& stop, const RunHooks<S>& hooks = {}) {
  settings.validate();
  if (stop.max_iterations < 1)
    throw std::invalid_argument("run_lanczos: max_iterations must be >= 1");

  QuadratureReport report;
  report.function_desc = f.describe();
  if (mode == LanczosMode::Auto) {
    report.warnings.push_back(
        "auto mode has no interaction spec to derive a witness from; running vanilla");
    mode = LanczosMode::Vanilla;
  }
  report.mode = mode;

  const double herm = check_symmetry(A, SymmetryKind::Hermitian);
  if (herm > hooks.hermiticity_tol)
    throw numerical_error("run_lanczos: input hermiticity residual " + std::to_string(herm));

  const bool vanilla = mode == LanczosMode::Vanilla;
  const bool safe = mode == LanczosMode::ChiralSafe;
  const auto& mon = hooks.monitors;

  std::optional<TensorTrain<S>> u_prev;
  TensorTrain<S> v = identity_mpo<S>(A.length(), A.phys_dim());
  TensorTrain<S> u = v;

  // Breakdown reference: the couplings beta_2.. are of the order of the
  // rms eigenvalue ||A||_F / sqrt(N), not of beta_1 = sqrt(N), which grows
  // exponentially in L and would trip the test spuriously on long chains.
  const double beta_scale =
      frobenius_norm(A) / std::pow(double(A.phys_dim()), double(A.length()) / 2.0);

  using clock = std::chrono::steady_clock;
  for (int i = 1; i <= stop.max_iterations; ++i) {
    const auto t0 = clock::now();
    const double beta = frobenius_norm(v);
    if (i == 1) report.jacobi.beta1 = beta;
    if (i > 1 && beta <= stop.breakdown_tol * beta_scale) {
      report.breakdown = true;
      report.stop_reason = StopReason::Breakdown;
      report.jacobi.betas.push_back(0.0);
      break;
    }
    if (i > 1) report.jacobi.betas.push_back(beta);

    u = scalar_multiply(S(1.0 / beta), v);

    auto mult = multiply(A, u, settings);
    v = std::move(mult.value);
    if (!mult.converged)
      report.warnings.push_back("compression did not converge in multiply at iteration " +
                                std::to_string(i));
    double add_residual = 0.0;
    if (u_prev) {
      auto sum = add(v, scalar_multiply(S(-beta), *u_prev), settings);
      v = std::move(sum.value);
      add_residual += sum.residual;
      if (!sum.converged)
        report.warnings.push_back("compression did not converge in sum at iteration " +
                                  std::to_string(i));
    }

    double alpha_stored = 0.0;
    std::optional<double> alpha_monitored;
    if (vanilla || safe) {
      const double a = detail::re(inner_product(u, v));
      auto sum = add(v, scalar_multiply(S(-a), u), settings);
      v = std::move(sum.value);
      add_residual += sum.residual;
      alpha_stored = vanilla ? a : 0.0;
      alpha_monitored = a;
    } else if (mon.enabled && mon.alpha_every > 0 && i % mon.alpha_every == 0) {
      alpha_monitored = detail::re(inner_product(u, v));  // read-only
    }
    report.jacobi.alphas.push_back(alpha_stored);
    if (alpha_monitored)
      report.max_abs_alpha = std::max(report.max_abs_alpha, std::abs(*alpha_monitored));

    const QuadratureRule rule = quadrature(report.jacobi, i, f);
    report.estimates.push_back(rule.estimate);

    IterationRow row;
    row.iteration = i;
    row.alpha = alpha_stored;
    row.beta = beta;
    row.estimate = rule.estimate;
    if (i > 1) {
      const double prev = report.estimates[report.estimates.size() - 2];
      row.rel_change = std::abs(rule.estimate - prev) / std::max(std::abs(prev), 1e-300);
    }
    row.max_bond = std::max(u.max_bond(), v.max_bond());
    row.multiply_residual = mult.residual;
    row.add_residual = add_residual;

    if (mon.enabled) {
      DiagnosticsRecord rec;
      rec.iteration = i;
      if (mon.trace_every > 0 && i % mon.trace_every == 0) rec.trace = check_traceless(u);
      if (mon.commutation_every > 0 && i % mon.commutation_every == 0)
        rec.commutation = check_commutation(A, u, settings);
      if (mon.symmetry_every > 0 && i % mon.symmetry_every == 0)
        for (SymmetryKind kind : all_symmetry_kinds())
          rec.symmetry_residuals[kind] = check_symmetry(u, kind);
      if (alpha_monitored) {
        rec.alpha_abs = std::abs(*alpha_monitored);
        if (*rec.alpha_abs > mon.warn_tol * report.jacobi.beta1)
          rec.warnings.push_back("alpha magnitude above threshold");
      }
      row.diagnostics = std::move(rec);
    }
    row.wall_ms =
        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    report.rows.push_back(std::move(row));
    report.iterations = i;

    if (hooks.retained_basis) hooks.retained_basis->push_back(u);

    if (hooks.checkpoint && hooks.checkpoint_every > 0 && i % hooks.checkpoint_every == 0) {
      KrylovState<S> state;
      state.u_prev = u_prev ? &*u_prev : nullptr;
      state.u_curr = &u;
      state.v = &v;
      state.jacobi = &report.jacobi;
      state.iteration = i;
      state.estimates = &report.estimates;
      hooks.checkpoint(state);
    }
    u_prev = u;

    if (check_stop(report.estimates, stop, i)) {
      report.stop_reason = i >= stop.max_iterations ? StopReason::IterationCap
                                                    : StopReason::RelChange;
      break;
    }
  }
  if (!report.estimates.empty()) report.estimate = report.estimates.back();
  return report;
}

}  // namespace ttrace
