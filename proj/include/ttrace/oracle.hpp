#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ttrace/jacobi.hpp"
#include "ttrace/spectral_function.hpp"
#include "ttrace/spin.hpp"

namespace ttrace {

/// Dense brute-force reference path. Everything here works on explicit
/// 2^L x 2^L matrices and is independent of the tensor-train code it checks.
struct DenseOperator {
  Eigen::MatrixXcd matrix;
  int length = 0;
};

constexpr Index kOracleDenseCap = 4096;  // 2^12

/// Definitional Kronecker-sum Hamiltonian, built by per-column bit action.
DenseOperator dense_hamiltonian(const InteractionSpec& spec, Index cap = kOracleDenseCap);

/// Sum of f over the full spectrum. Refuses inputs whose hermiticity
/// residual exceeds 1e-10. Uses a real solver when the matrix is real.
double dense_trace_fn(const DenseOperator& a, const SpectralFunction& f);

struct DenseLanczosResult {
  JacobiMatrix jacobi;
  std::vector<Eigen::MatrixXcd> basis;  // U_1.. when retained
  bool breakdown = false;
  int iterations = 0;
};

/// Global Lanczos recurrence in dense arithmetic, starting from the
/// identity. ChiralFast skips the alpha projection entirely; ChiralSafe
/// projects but stores zero alphas.
DenseLanczosResult dense_global_lanczos(const DenseOperator& a, int max_iterations,
                                        bool retain_all,
                                        LanczosMode mode = LanczosMode::Vanilla,
                                        double breakdown_tol = 1e-12);

/// Frobenius residual of A U_i = U_i T~_i + beta_{i+1} U_{i+1} E_i^T,
/// normalized by ||A||_F. The final block is included when the terminal
/// coupling is known (zero at breakdown); otherwise the relation is
/// checked on the first size(basis)-1 columns.
double lanczos_residual(const DenseOperator& a, const std::vector<Eigen::MatrixXcd>& basis,
                        const JacobiMatrix& j);

}  // namespace ttrace
