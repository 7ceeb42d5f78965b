#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttrace/compression.hpp"
#include "ttrace/jacobi.hpp"
#include "ttrace/tensor_train.hpp"

namespace ttrace {

enum class SymmetryKind : std::uint8_t {
  Symmetric,
  Persymmetric,
  Centrosymmetric,
  Hermitian,
  Perhermitian,
  Centrohermitian,
};

std::string symmetry_kind_name(SymmetryKind k);
const std::vector<SymmetryKind>& all_symmetry_kinds();

struct TraceCheck {
  double abs_trace = 0.0;   // |Tr U|
  double normalized = 0.0;  // |Tr U| / ||U||_F
};

struct CommutationCheck {
  double residual = 0.0;     // ||AU - UA||_F / (||A||_F ||U||_F)
  double uncertainty = 0.0;  // compression residuals folded in
};

/// Per-iteration monitor output for one basis operator.
struct DiagnosticsRecord {
  int iteration = 0;
  std::optional<TraceCheck> trace;
  std::optional<CommutationCheck> commutation;
  std::map<SymmetryKind, double> symmetry_residuals;
  std::optional<double> alpha_abs;
  std::vector<std::string> warnings;
};

/// Monitor cadences; a period of 0 disables that check. Checks cost MPO
/// products, so the benchmark path runs with `enabled = false`.
struct MonitorSettings {
  bool enabled = true;
  int trace_every = 1;
  int alpha_every = 1;
  int commutation_every = 5;
  int symmetry_every = 5;
  double warn_tol = 1e-6;
};

namespace detail {
template <class S>
double re(S v) {
  if constexpr (is_complex_v<S>)
    return v.real();
  else
    return v;
}

// ||X - Y||_F through a canonicalization sweep; the overlap formula
// ||X||^2 + ||Y||^2 - 2 Re<X,Y> loses half the digits to cancellation
// exactly where these residuals need to resolve, near zero.
template <class S>
double diff_norm(const TensorTrain<S>& x, const TensorTrain<S>& y) {
  return diff_norm_stable(x, y);
}
}  // namespace detail

template <class S>
TraceCheck check_traceless(const TensorTrain<S>& u) {
  TraceCheck out;
  out.abs_trace = std::abs(trace(u));
  const double n = frobenius_norm(u);
  out.normalized = n > 0 ? out.abs_trace / n : 0.0;
  return out;
}

/// Residual of the named matrix symmetry, normalized by ||U||_F. The
/// exchange J enters as a per-site relabeling, so every variant preserves
/// bond dimensions and evaluates exactly.
template <class S>
double check_symmetry(const TensorTrain<S>& u, SymmetryKind kind) {
  const double n = frobenius_norm(u);
  if (n == 0.0) return 0.0;
  double diff = 0.0;
  switch (kind) {
    case SymmetryKind::Symmetric:
      diff = detail::diff_norm(u, transpose_phys(u));
      break;
    case SymmetryKind::Persymmetric:
      diff = detail::diff_norm(exchange_right(u), exchange_left(transpose_phys(u)));
      break;
    case SymmetryKind::Centrosymmetric:
      diff = detail::diff_norm(exchange_left(u), exchange_right(u));
      break;
    case SymmetryKind::Hermitian:
      diff = detail::diff_norm(u, adjoint_phys(u));
      break;
    case SymmetryKind::Perhermitian:
      diff = detail::diff_norm(exchange_right(u), exchange_left(adjoint_phys(u)));
      break;
    case SymmetryKind::Centrohermitian:
      diff = detail::diff_norm(exchange_left(u), exchange_right(conj_phys(u)));
      break;
  }
  return diff / n;
}

template <class S>
CommutationCheck check_commutation(const TensorTrain<S>& a, const TensorTrain<S>& u,
                                   const CompressionSettings& settings = exact_settings()) {
  if (a.length() != u.length() || a.phys_dim() != u.phys_dim())
    throw std::invalid_argument("check_commutation: shape mismatch");
  const auto au = multiply(a, u, settings);
  const auto ua = multiply(u, a, settings);
  const double na = frobenius_norm(a);
  const double nu = frobenius_norm(u);
  CommutationCheck out;
  if (na == 0.0 || nu == 0.0) return out;
  out.residual = detail::diff_norm(au.value, ua.value) / (na * nu);
  out.uncertainty = (au.residual * frobenius_norm(au.value) +
                     ua.residual * frobenius_norm(ua.value)) /
                    (na * nu);
  return out;
}

struct AlphaWarning {
  int iteration = 0;  // 1-based
  double value = 0.0;
};

/// Flags every |alpha_i| > tol * beta_1. Small alphas are necessary but not
/// sufficient for an accurate approximation, so the report carries that
/// caveat explicitly.
struct AlphaMonitorReport {
  std::vector<AlphaWarning> warnings;
  bool necessary_not_sufficient = true;
};

AlphaMonitorReport monitor_alphas(const JacobiMatrix& j, double tol);
AlphaMonitorReport monitor_alphas(const std::vector<double>& alphas, double beta1, double tol);

}  // namespace ttrace
