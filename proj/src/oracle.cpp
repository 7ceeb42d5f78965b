#include "ttrace/oracle.hpp"

#include <cmath>

#include "ttrace/errors.hpp"

namespace ttrace {

DenseOperator dense_hamiltonian(const InteractionSpec& spec, Index cap) {
  spec.validate();
  const Index N = dense_dim(spec.length, 2);
  if (N > cap) throw std::invalid_argument("dense_hamiltonian: dimension exceeds cap");
  DenseOperator out;
  out.length = static_cast<int>(spec.length);
  out.matrix = Eigen::MatrixXcd::Zero(N, N);
  const Index L = spec.length;
  for (const auto& ws : expand_terms(spec)) {
    if (ws.coeff == 0.0) continue;
    for (Index col = 0; col < N; ++col) {
      Index row = col;
      cd phase = ws.coeff;
      for (Index s = 0; s < L; ++s) {
        const Index bitpos = L - 1 - s;
        const Index bit = (col >> bitpos) & 1;
        switch (ws.labels[static_cast<std::size_t>(s)]) {
          case PauliOp::I: break;
          case PauliOp::X: row ^= (Index(1) << bitpos); break;
          case PauliOp::Y:
            row ^= (Index(1) << bitpos);
            phase *= bit ? cd(0, -1) : cd(0, 1);
            break;
          case PauliOp::Z:
            if (bit) phase = -phase;
            break;
        }
      }
      out.matrix(row, col) += phase;
    }
  }
  return out;
}

namespace {

bool is_real(const Eigen::MatrixXcd& m) {
  return m.imag().cwiseAbs().maxCoeff() == 0.0;
}

Eigen::VectorXd spectrum(const Eigen::MatrixXcd& m) {
  if (is_real(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numerical_error("dense eigensolver failed");
    return es.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numerical_error("dense eigensolver failed");
  return es.eigenvalues();
}

}  // namespace

double dense_trace_fn(const DenseOperator& a, const SpectralFunction& f) {
  const double norm = a.matrix.norm();
  const double herm = (a.matrix - a.matrix.adjoint()).norm();
  if (herm > 1e-10 * std::max(norm, 1.0))
    throw numerical_error("dense_trace_fn: input is not Hermitian");
  const Eigen::VectorXd ev = spectrum((a.matrix + a.matrix.adjoint()) / 2.0);
  double sum = 0;
  for (Index k = 0; k < ev.size(); ++k) sum += f(ev(k));
  return sum;
}

DenseLanczosResult dense_global_lanczos(const DenseOperator& a, int max_iterations,
                                        bool retain_all, LanczosMode mode,
                                        double breakdown_tol) {
  const Index N = a.matrix.rows();
  DenseLanczosResult out;
  // same breakdown reference as the tensor-train driver: the rms eigenvalue
  const double beta_scale = a.matrix.norm() / std::sqrt(double(N));
  Eigen::MatrixXcd u_prev = Eigen::MatrixXcd::Zero(N, N);
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(N, N);
  Eigen::MatrixXcd u(N, N);
  for (int i = 1; i <= max_iterations; ++i) {
    const double beta = v.norm();
    if (i == 1) out.jacobi.beta1 = beta;
    if (i > 1 && beta <= breakdown_tol * beta_scale) {
      out.breakdown = true;
      out.jacobi.betas.push_back(0.0);
      break;
    }
    if (i > 1) out.jacobi.betas.push_back(beta);
    u = v / beta;
    v = a.matrix * u;
    if (i > 1) v -= beta * u_prev;
    if (mode == LanczosMode::ChiralFast) {
      out.jacobi.alphas.push_back(0.0);
    } else {
      const double alpha = (u.conjugate().cwiseProduct(v)).sum().real();
      v -= alpha * u;
      out.jacobi.alphas.push_back(mode == LanczosMode::ChiralSafe ? 0.0 : alpha);
    }
    u_prev = u;
    if (retain_all) out.basis.push_back(u);
    out.iterations = i;
  }
  return out;
}

double lanczos_residual(const DenseOperator& a, const std::vector<Eigen::MatrixXcd>& basis,
                        const JacobiMatrix& j) {
  const std::size_t m = basis.size();
  if (m == 0) throw std::invalid_argument("lanczos_residual: empty basis");
  if (j.alphas.size() < m) throw std::invalid_argument("lanczos_residual: missing alphas");
  for (const auto& u : basis)
    if (u.rows() != a.matrix.rows() || u.cols() != a.matrix.cols())
      throw std::invalid_argument("lanczos_residual: dimension mismatch");
  const bool have_terminal = j.betas.size() >= m;
  const std::size_t blocks = have_terminal ? m : m - 1;
  double sq = 0;
  for (std::size_t n = 1; n <= blocks; ++n) {
    Eigen::MatrixXcd r = a.matrix * basis[n - 1];
    r -= j.alphas[n - 1] * basis[n - 1];
    if (n >= 2) r -= j.betas[n - 2] * basis[n - 2];
    if (n < m)
      r -= j.betas[n - 1] * basis[n];
    else if (have_terminal && j.betas[n - 1] != 0.0)
      throw std::invalid_argument("lanczos_residual: terminal beta nonzero but U_{i+1} missing");
    sq += r.squaredNorm();
  }
  if (blocks == 0) return 0.0;
  return std::sqrt(sq) / a.matrix.norm();
}

}  // namespace ttrace
