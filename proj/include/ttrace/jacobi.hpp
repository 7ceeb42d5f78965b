#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ttrace/spectral_function.hpp"

namespace ttrace {

enum class LanczosMode : std::uint8_t { Vanilla, ChiralFast, ChiralSafe, Auto };

std::string mode_name(LanczosMode m);
LanczosMode mode_from_name(const std::string& name);

/// Coefficients of the projection T_i: diagonal alphas (alpha_1..alpha_i),
/// off-diagonal couplings betas (beta_2..), and the starting normalization
/// beta_1. In the chiral modes the stored alphas are exactly zero. A
/// terminal zero beta marks breakdown.
struct JacobiMatrix {
  std::vector<double> alphas;
  std::vector<double> betas;
  double beta1 = 0.0;
};

/// Dense symmetric tridiagonal T_i for the first i iterations.
Eigen::MatrixXd assemble_jacobi(const JacobiMatrix& j, int i);

struct QuadratureRule {
  double estimate = 0.0;
  Eigen::VectorXd ritz_values;
  Eigen::VectorXd weights;  // beta1^2 |V(1,k)|^2
};

/// Gauss quadrature: spectral-decompose T and return
/// beta1^2 sum_k |V(1,k)|^2 f(lambda_k) together with nodes and weights.
QuadratureRule quadrature(const Eigen::MatrixXd& T, double beta1, const SpectralFunction& f);
QuadratureRule quadrature(const JacobiMatrix& j, int i, const SpectralFunction& f);

struct StoppingCriteria {
  int max_iterations = 100;       // K
  double rel_change_tol = 1e-6;   // <= 0 disables the relative-change stop
  double breakdown_tol = 1e-12;   // relative to beta_1
};

/// True once the last two estimates differ by less than rel_change_tol
/// relatively (absolute guard 1e-300 near zero), or the iteration cap is hit.
bool check_stop(const std::vector<double>& estimates, const StoppingCriteria& stop,
                int iteration);

}  // namespace ttrace
