#include "ttrace/jacobi.hpp"

#include <cmath>
#include <stdexcept>

#include "ttrace/errors.hpp"

namespace ttrace {

std::string mode_name(LanczosMode m) {
  switch (m) {
    case LanczosMode::Vanilla: return "vanilla";
    case LanczosMode::ChiralFast: return "chiral_fast";
    case LanczosMode::ChiralSafe: return "chiral_safe";
    case LanczosMode::Auto: return "auto";
  }
  return "?";
}

LanczosMode mode_from_name(const std::string& name) {
  if (name == "vanilla") return LanczosMode::Vanilla;
  if (name == "chiral_fast") return LanczosMode::ChiralFast;
  if (name == "chiral_safe") return LanczosMode::ChiralSafe;
  if (name == "auto") return LanczosMode::Auto;
  throw std::invalid_argument("unknown lanczos mode '" + name + "'");
}

Eigen::MatrixXd assemble_jacobi(const JacobiMatrix& j, int i) {
  if (i < 1 || i > static_cast<int>(j.alphas.size()) ||
      i - 1 > static_cast<int>(j.betas.size()))
    throw std::out_of_range("assemble_jacobi: iteration out of range");
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(i, i);
  for (int n = 0; n < i; ++n) T(n, n) = j.alphas[static_cast<std::size_t>(n)];
  for (int n = 0; n + 1 < i; ++n) {
    T(n, n + 1) = j.betas[static_cast<std::size_t>(n)];
    T(n + 1, n) = j.betas[static_cast<std::size_t>(n)];
  }
  return T;
}

QuadratureRule quadrature(const Eigen::MatrixXd& T, double beta1, const SpectralFunction& f) {
  const int n = static_cast<int>(T.rows());
  if (T.cols() != n || n < 1) throw std::invalid_argument("quadrature: T must be square");
  Eigen::VectorXd diag = T.diagonal();
  Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
  for (int k = 0; k + 1 < n; ++k) sub(k) = T(k + 1, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, n > 1 ? sub.head(n - 1) : Eigen::VectorXd(),
                            Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw numerical_error("quadrature: tridiagonal eigendecomposition failed");
  QuadratureRule rule;
  rule.ritz_values = es.eigenvalues();
  rule.weights.resize(n);
  rule.estimate = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = beta1 * beta1 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
    rule.weights(k) = w;
    rule.estimate += w * f(rule.ritz_values(k));
  }
  return rule;
}

QuadratureRule quadrature(const JacobiMatrix& j, int i, const SpectralFunction& f) {
  return quadrature(assemble_jacobi(j, i), j.beta1, f);
}

bool check_stop(const std::vector<double>& estimates, const StoppingCriteria& stop,
                int iteration) {
  if (iteration >= stop.max_iterations) return true;
  if (stop.rel_change_tol <= 0) return false;
  if (estimates.size() < 2) return false;
  const double last = estimates.back();
  const double prev = estimates[estimates.size() - 2];
  const double rel = std::abs(last - prev) / std::max(std::abs(prev), 1e-300);
  return rel < stop.rel_change_tol;
}

}  // namespace ttrace
