#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "ttrace/tensor_train.hpp"

#ifdef TTRACE_USE_LAPACKE
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
extern "C" void openblas_set_num_threads(int);
#endif

namespace ttrace {

inline constexpr Index kUnboundedBond = Index(1) << 30;

struct CompressionSettings {
  Index max_bond = kUnboundedBond;  // D_max
  double svd_cutoff = 0.0;          // relative singular value threshold
  int max_sweeps = 4;               // full (two-direction) fitting sweeps
  double sweep_tol = 1e-8;          // relative residual-change stop

  void validate() const {
    if (max_bond < 1) throw std::invalid_argument("max_bond must be >= 1");
    if (svd_cutoff < 0 || svd_cutoff >= 1)
      throw std::invalid_argument("svd_cutoff must be in [0, 1)");
    if (max_sweeps < 0) throw std::invalid_argument("max_sweeps must be >= 0");
    if (sweep_tol < 0) throw std::invalid_argument("sweep_tol must be >= 0");
  }
};

/// Rank cap off, cutoff just above roundoff: deflates numerically zero
/// singular values so exact-arithmetic runs keep their bond dimensions at
/// the true ranks instead of growing with every concatenation.
inline CompressionSettings exact_settings() {
  CompressionSettings s;
  s.max_bond = kUnboundedBond;
  s.svd_cutoff = 1e-14;
  return s;
}

template <class S>
struct CompressionOutcome {
  TensorTrain<S> value;
  double residual = 0.0;                // ||value - input||_F / ||input||_F
  std::vector<double> sweep_residuals;  // [after truncation, after sweep 1, ...]
  bool converged = true;
  Index input_max_bond = 0;
};

namespace detail {

// Residuals below this are treated as converged regardless of sweep_tol;
// fitting cannot improve on contraction roundoff.
inline constexpr double kResidualFloor = 1e-13;

template <class S>
struct ThinSvd {
  Mat<S> u;
  Eigen::VectorXd s;
  Mat<S> vh;  // rows are the right singular vectors, conjugated
};

#ifdef TTRACE_USE_LAPACKE
inline lapack_int gesdd(char jobz, lapack_int m, lapack_int n, double* a, lapack_int lda,
                        double* s, double* u, lapack_int ldu, double* vt, lapack_int ldvt) {
  return LAPACKE_dgesdd(LAPACK_COL_MAJOR, jobz, m, n, a, lda, s, u, ldu, vt, ldvt);
}
inline lapack_int gesdd(char jobz, lapack_int m, lapack_int n, cd* a, lapack_int lda,
                        double* s, cd* u, lapack_int ldu, cd* vt, lapack_int ldvt) {
  return LAPACKE_zgesdd(LAPACK_COL_MAJOR, jobz, m, n, a, lda, s, u, ldu, vt, ldvt);
}
#endif

/// Thin SVD used by all truncations. LAPACK's divide-and-conquer driver is
/// noticeably faster than Eigen's at the block sizes sweeps produce; the
/// BDCSVD path remains as the portable fallback.
template <class S>
ThinSvd<S> thin_svd(const Mat<S>& a) {
  ThinSvd<S> out;
#ifdef TTRACE_USE_LAPACKE
  static const bool threads_pinned = [] {
    openblas_set_num_threads(1);  // keep timings and results deterministic
    return true;
  }();
  (void)threads_pinned;
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  Mat<S> work = a;
  out.s.resize(k);
  out.u.resize(m, k);
  Mat<S> vt(k, n);
  const lapack_int info = gesdd('S', m, n, work.data(), m, out.s.data(), out.u.data(), m,
                                vt.data(), k);
  if (info == 0) {
    out.vh = std::move(vt);
    return out;
  }
  // rare non-convergence: fall through to the Eigen driver
#endif
  Eigen::BDCSVD<Mat<S>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.u = svd.matrixU();
  out.s = svd.singularValues();
  out.vh = svd.matrixV().adjoint();
  return out;
}

template <class S>
void left_canonicalize(TensorTrain<S>& W) {
  const Index L = W.length();
  const int d = W.phys_dim();
  for (Index k = 0; k + 1 < L; ++k) {
    Mat<S> A = W.core(k).left_unfold();
    Eigen::HouseholderQR<Mat<S>> qr(A);
    const Index r = std::min(A.rows(), A.cols());
    Mat<S> Q = qr.householderQ() * Mat<S>::Identity(A.rows(), r);
    Mat<S> R = qr.matrixQR().topRows(r).template triangularView<Eigen::Upper>();
    Core<S> nc(W.core(k).dl, r, d);
    nc.left_unfold() = Q;
    W.core(k) = std::move(nc);
    auto& nxt = W.core(k + 1);
    Mat<S> merged = R * nxt.right_unfold();
    Core<S> nn(r, nxt.dr, d);
    nn.right_unfold() = merged;
    W.core(k + 1) = std::move(nn);
  }
}

// Right-to-left SVD truncation of a left-canonical chain. Leaves the chain
// right-canonical with the weight collected in core 0.
template <class S>
void truncate_right_to_left(TensorTrain<S>& W, Index max_bond, double cutoff) {
  const Index L = W.length();
  const int d = W.phys_dim();
  for (Index k = L - 1; k >= 1; --k) {
    Mat<S> A = W.core(k).right_unfold();
    const ThinSvd<S> svd = thin_svd(A);
    const double smax = svd.s.size() ? svd.s(0) : 0.0;
    Index r = 0;
    for (Index t = 0; t < svd.s.size(); ++t)
      if (svd.s(t) > 0 && svd.s(t) >= cutoff * smax) ++r;
    r = std::clamp<Index>(r, 1, max_bond);
    Core<S> nc(r, W.core(k).dr, d);
    nc.right_unfold() = svd.vh.topRows(r);
    W.core(k) = std::move(nc);
    Mat<S> carry = svd.u.leftCols(r) * svd.s.head(r).asDiagonal();
    auto& prev = W.core(k - 1);
    Mat<S> merged = prev.left_unfold() * carry;
    Core<S> np(prev.dl, r, d);
    np.left_unfold() = merged;
    W.core(k - 1) = std::move(np);
  }
}

// E[k+1] = sum_ij W_k[ij]^H E[k] X_k[ij]
template <class S>
Mat<S> env_step_left(const Core<S>& w, const Core<S>& x, const Mat<S>& E) {
  Mat<S> out = Mat<S>::Zero(w.dr, x.dr);
  for (int i = 0; i < w.d; ++i)
    for (int j = 0; j < w.d; ++j)
      out.noalias() += w.phys(i, j).adjoint() * E * x.phys(i, j);
  return out;
}

// F[k] = sum_ij conj(W_k[ij]) F[k+1] X_k[ij]^T
template <class S>
Mat<S> env_step_right(const Core<S>& w, const Core<S>& x, const Mat<S>& F) {
  Mat<S> out = Mat<S>::Zero(w.dl, x.dl);
  for (int i = 0; i < w.d; ++i)
    for (int j = 0; j < w.d; ++j)
      out.noalias() += w.phys(i, j).conjugate() * F * x.phys(i, j).transpose();
  return out;
}

// Locally optimal core: B[ij] = E X[ij] F^T. Returns sum of squared norms.
template <class S>
double project_core(const Mat<S>& E, const Core<S>& x, const Mat<S>& F, Core<S>& out) {
  double sq = 0;
  for (int i = 0; i < x.d; ++i)
    for (int j = 0; j < x.d; ++j) {
      out.phys(i, j).noalias() = E * x.phys(i, j) * F.transpose();
      sq += out.phys(i, j).squaredNorm();
    }
  return sq;
}

template <class S>
void left_orthonormalize_core(Core<S>& c) {
  Mat<S> A = c.left_unfold();
  Eigen::HouseholderQR<Mat<S>> qr(A);
  c.left_unfold() = qr.householderQ() * Mat<S>::Identity(A.rows(), A.cols());
}

template <class S>
void right_orthonormalize_core(Core<S>& c) {
  Mat<S> A = c.right_unfold().adjoint();
  Eigen::HouseholderQR<Mat<S>> qr(A);
  Mat<S> Q = qr.householderQ() * Mat<S>::Identity(A.rows(), A.cols());
  c.right_unfold() = Q.adjoint();
}

}  // namespace detail

/// ||X||_F via a canonicalization sweep. Unlike sqrt(<X,X>) this stays
/// accurate for representations with large cores and a tiny represented
/// norm (differences of nearly equal operators).
template <class S>
double canonical_norm(const TensorTrain<S>& X) {
  TensorTrain<S> W = X;
  detail::left_canonicalize(W);
  return std::sqrt(W.core(W.length() - 1).squared_norm());
}

template <class S>
double diff_norm_stable(const TensorTrain<S>& X, const TensorTrain<S>& Y) {
  return canonical_norm(add_exact(X, scalar_multiply(S(-1), Y)));
}

/// Canonicalize, truncate every bond to the settings, then refine by
/// alternating single-site least-squares sweeps against the input.
/// The reported residual is the exact relative distance to the input.
template <class S>
CompressionOutcome<S> compress(const TensorTrain<S>& X, const CompressionSettings& settings) {
  settings.validate();
  CompressionOutcome<S> out;
  out.input_max_bond = X.max_bond();
  const Index L = X.length();

  if (L == 1 || (settings.svd_cutoff == 0.0 && out.input_max_bond <= settings.max_bond)) {
    out.value = X;
    out.sweep_residuals.push_back(0.0);
    return out;
  }

  TensorTrain<S> W = X;
  detail::left_canonicalize(W);
  const double norm_x = std::sqrt(W.core(L - 1).squared_norm());
  if (norm_x == 0.0) {
    out.value = zero_mpo<S>(L, X.phys_dim());
    out.sweep_residuals.push_back(0.0);
    return out;
  }
  detail::truncate_right_to_left(W, settings.max_bond, settings.svd_cutoff);

  // right environments of <W, X>; F[0] is the full overlap
  std::vector<Mat<S>> F(static_cast<std::size_t>(L) + 1);
  F[static_cast<std::size_t>(L)] = Mat<S>::Ones(1, 1);
  for (Index k = L - 1; k >= 0; --k)
    F[static_cast<std::size_t>(k)] =
        detail::env_step_right(W.core(k), X.core(k), F[static_cast<std::size_t>(k + 1)]);

  const double norm_w_sq = W.core(0).squared_norm();
  double overlap_re;
  if constexpr (is_complex_v<S>)
    overlap_re = F[0](0, 0).real();
  else
    overlap_re = F[0](0, 0);
  double res_sq = std::max(0.0, norm_x * norm_x - 2 * overlap_re + norm_w_sq);
  double residual = std::sqrt(res_sq) / norm_x;
  out.sweep_residuals.push_back(residual);

  std::vector<Mat<S>> E(static_cast<std::size_t>(L) + 1);
  E[0] = Mat<S>::Ones(1, 1);

  bool converged = residual < detail::kResidualFloor || settings.max_sweeps == 0;
  for (int sweep = 0; sweep < settings.max_sweeps && !converged; ++sweep) {
    double local_sq = 0;
    // left-to-right pass
    for (Index k = 0; k < L; ++k) {
      Core<S> B(W.core(k).dl, W.core(k).dr, W.core(k).d);
      local_sq = detail::project_core(E[static_cast<std::size_t>(k)], X.core(k),
                                      F[static_cast<std::size_t>(k + 1)], B);
      W.core(k) = std::move(B);
      if (k + 1 < L) {
        detail::left_orthonormalize_core(W.core(k));
        E[static_cast<std::size_t>(k + 1)] = detail::env_step_left(
            W.core(k), X.core(k), E[static_cast<std::size_t>(k)]);
      }
    }
    // right-to-left pass
    for (Index k = L - 1; k >= 0; --k) {
      Core<S> B(W.core(k).dl, W.core(k).dr, W.core(k).d);
      local_sq = detail::project_core(E[static_cast<std::size_t>(k)], X.core(k),
                                      F[static_cast<std::size_t>(k + 1)], B);
      W.core(k) = std::move(B);
      if (k > 0) {
        detail::right_orthonormalize_core(W.core(k));
        F[static_cast<std::size_t>(k)] = detail::env_step_right(
            W.core(k), X.core(k), F[static_cast<std::size_t>(k + 1)]);
      }
    }
    double new_residual =
        std::sqrt(std::max(0.0, norm_x * norm_x - local_sq)) / norm_x;
    double change = std::abs(residual - new_residual) / std::max(residual, 1e-300);
    residual = std::min(residual, new_residual);
    out.sweep_residuals.push_back(residual);
    converged = change < settings.sweep_tol || residual < detail::kResidualFloor;
  }
  out.converged = converged;
  out.value = std::move(W);
  out.residual = residual;
  return out;
}

/// X + Y followed by compression; the residual is relative to the exact sum.
template <class S>
CompressionOutcome<S> add(const TensorTrain<S>& X, const TensorTrain<S>& Y,
                          const CompressionSettings& settings) {
  return compress(add_exact(X, Y), settings);
}

/// A * X followed by compression; the residual is relative to the exact product.
template <class S>
CompressionOutcome<S> multiply(const TensorTrain<S>& A, const TensorTrain<S>& X,
                               const CompressionSettings& settings) {
  return compress(multiply_exact(A, X), settings);
}

}  // namespace ttrace
