#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <type_traits>
#include <utility>
#include <vector>

#include "ttrace/errors.hpp"

namespace ttrace {

using cd = std::complex<double>;
using Index = Eigen::Index;

template <class S>
inline constexpr bool is_complex_v = false;
template <class T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using RowMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One site tensor of a matrix product operator. Element order is
/// (left bond a, physical row i, physical col j, right bond b) with b fastest,
/// so both unfoldings used by sweeps are plain reshapes:
///   left unfolding  (a,i,j) x b   -> contiguous row-major (dl*d*d) x dr
///   right unfolding  a x (i,j,b)  -> contiguous row-major dl x (d*d*dr)
template <class S>
struct Core {
  Index dl = 0, dr = 0;
  int d = 2;
  std::vector<S> data;

  Core() = default;
  Core(Index dl_, Index dr_, int d_)
      : dl(dl_), dr(dr_), d(d_), data(static_cast<std::size_t>(dl_ * dr_ * d_ * d_), S(0)) {}

  S& at(Index a, int i, int j, Index b) {
    return data[static_cast<std::size_t>(((a * d + i) * d + j) * dr + b)];
  }
  S at(Index a, int i, int j, Index b) const {
    return data[static_cast<std::size_t>(((a * d + i) * d + j) * dr + b)];
  }

  using MapRM = Eigen::Map<RowMat<S>>;
  using ConstMapRM = Eigen::Map<const RowMat<S>>;
  using StridedMap = Eigen::Map<RowMat<S>, 0, Eigen::OuterStride<>>;
  using ConstStridedMap = Eigen::Map<const RowMat<S>, 0, Eigen::OuterStride<>>;

  MapRM left_unfold() { return MapRM(data.data(), dl * d * d, dr); }
  ConstMapRM left_unfold() const { return ConstMapRM(data.data(), dl * d * d, dr); }
  MapRM right_unfold() { return MapRM(data.data(), dl, d * d * dr); }
  ConstMapRM right_unfold() const { return ConstMapRM(data.data(), dl, d * d * dr); }

  /// dl x dr slice for fixed physical pair (i,j).
  StridedMap phys(int i, int j) {
    return StridedMap(data.data() + (i * d + j) * dr, dl, dr, Eigen::OuterStride<>(d * d * dr));
  }
  ConstStridedMap phys(int i, int j) const {
    return ConstStridedMap(data.data() + (i * d + j) * dr, dl, dr,
                           Eigen::OuterStride<>(d * d * dr));
  }

  double squared_norm() const {
    double s = 0;
    for (const S& v : data) s += std::norm(v);
    return s;
  }
};

/// Matrix product operator on (C^d)^{(x) L}, stored as a chain of core
/// tensors with boundary bonds of size 1. Value semantics throughout.
template <class S>
class TensorTrain {
 public:
  TensorTrain() = default;
  explicit TensorTrain(std::vector<Core<S>> cores) : cores_(std::move(cores)) { validate(); }

  Index length() const { return static_cast<Index>(cores_.size()); }
  int phys_dim() const { return cores_.empty() ? 0 : cores_.front().d; }

  /// Bond k sits between cores k-1 and k; bond(0) = bond(L) = 1.
  Index bond(Index k) const {
    return k == 0 ? cores_.front().dl : cores_[static_cast<std::size_t>(k - 1)].dr;
  }
  Index max_bond() const {
    Index m = 1;
    for (const auto& c : cores_) m = std::max(m, std::max(c.dl, c.dr));
    return m;
  }

  Core<S>& core(Index k) { return cores_[static_cast<std::size_t>(k)]; }
  const Core<S>& core(Index k) const { return cores_[static_cast<std::size_t>(k)]; }
  std::vector<Core<S>>& cores() { return cores_; }
  const std::vector<Core<S>>& cores() const { return cores_; }

  void validate() const {
    if (cores_.empty()) throw std::invalid_argument("tensor train must have at least one core");
    if (cores_.front().dl != 1 || cores_.back().dr != 1)
      throw std::invalid_argument("boundary bond dimensions must be 1");
    for (std::size_t k = 0; k + 1 < cores_.size(); ++k) {
      if (cores_[k].dr != cores_[k + 1].dl)
        throw std::invalid_argument("adjacent bond dimensions do not match");
      if (cores_[k].d != cores_[k + 1].d)
        throw std::invalid_argument("physical dimensions do not match");
    }
  }

 private:
  std::vector<Core<S>> cores_;
};

using TensorTrainD = TensorTrain<double>;
using TensorTrainZ = TensorTrain<cd>;

/// Identity operator as an MPO; bond dimension 1 everywhere.
template <class S = double>
TensorTrain<S> identity_mpo(Index L, int d = 2) {
  if (L < 1) throw std::invalid_argument("identity_mpo: L must be >= 1");
  if (d < 1) throw std::invalid_argument("identity_mpo: d must be >= 1");
  std::vector<Core<S>> cores(static_cast<std::size_t>(L), Core<S>(1, 1, d));
  for (auto& c : cores)
    for (int i = 0; i < d; ++i) c.at(0, i, i, 0) = S(1);
  return TensorTrain<S>(std::move(cores));
}

/// Zero operator with bond dimension 1.
template <class S = double>
TensorTrain<S> zero_mpo(Index L, int d = 2) {
  if (L < 1) throw std::invalid_argument("zero_mpo: L must be >= 1");
  return TensorTrain<S>(std::vector<Core<S>>(static_cast<std::size_t>(L), Core<S>(1, 1, d)));
}

/// Tr X by contracting each core's physical indices pairwise, then chaining
/// the resulting bond matrices. Linear in L.
template <class S>
S trace(const TensorTrain<S>& X) {
  Mat<S> acc = Mat<S>::Ones(1, 1);
  for (Index k = 0; k < X.length(); ++k) {
    const auto& c = X.core(k);
    Mat<S> m = Mat<S>::Zero(c.dl, c.dr);
    for (int i = 0; i < c.d; ++i) m += c.phys(i, i);
    acc = (acc * m).eval();
  }
  return acc(0, 0);
}

/// Frobenius inner product <X,Y> = Tr X^* Y via a transfer-matrix sweep.
template <class S>
S inner_product(const TensorTrain<S>& X, const TensorTrain<S>& Y) {
  if (X.length() != Y.length() || X.phys_dim() != Y.phys_dim())
    throw std::invalid_argument("inner_product: shape mismatch");
  Mat<S> env = Mat<S>::Ones(1, 1);
  for (Index k = 0; k < X.length(); ++k) {
    const auto& cx = X.core(k);
    const auto& cy = Y.core(k);
    Mat<S> next = Mat<S>::Zero(cx.dr, cy.dr);
    for (int i = 0; i < cx.d; ++i)
      for (int j = 0; j < cx.d; ++j)
        next.noalias() += cx.phys(i, j).adjoint() * env * cy.phys(i, j);
    env.swap(next);
  }
  return env(0, 0);
}

namespace detail {
// Upper bound on log(||X||_F^2); used only to scale roundoff tolerances.
template <class S>
double log_norm_sq_upper(const TensorTrain<S>& X) {
  double acc = 0;
  for (Index k = 0; k < X.length(); ++k)
    acc += std::log(X.core(k).squared_norm() + 1e-300);
  return acc;
}
}  // namespace detail

/// ||X||_F = sqrt(<X,X>). A negative radicand beyond roundoff signals a
/// broken contraction (e.g. lost hermiticity) and raises numerical_error.
template <class S>
double frobenius_norm(const TensorTrain<S>& X) {
  S v = inner_product(X, X);
  double re;
  if constexpr (is_complex_v<S>)
    re = v.real();
  else
    re = v;
  if (re < 0) {
    double log_scale = detail::log_norm_sq_upper(X);
    if (std::log(-re) > std::log(1e-12) + log_scale)
      throw numerical_error("frobenius_norm: negative squared norm " + std::to_string(re));
    re = 0;
  }
  return std::sqrt(re);
}

/// c * X. The scaling lands in exactly one core (the first).
template <class S>
TensorTrain<S> scalar_multiply(S c, const TensorTrain<S>& X) {
  TensorTrain<S> out = X;
  for (S& v : out.core(0).data) v *= c;
  return out;
}

/// Exact X + Y by block concatenation; bond dimensions add at inner bonds.
template <class S>
TensorTrain<S> add_exact(const TensorTrain<S>& X, const TensorTrain<S>& Y) {
  if (X.length() != Y.length() || X.phys_dim() != Y.phys_dim())
    throw std::invalid_argument("add: shape mismatch");
  const Index L = X.length();
  const int d = X.phys_dim();
  if (L == 1) {
    TensorTrain<S> out = X;
    for (std::size_t n = 0; n < out.core(0).data.size(); ++n)
      out.core(0).data[n] += Y.core(0).data[n];
    return out;
  }
  std::vector<Core<S>> cores;
  cores.reserve(static_cast<std::size_t>(L));
  for (Index k = 0; k < L; ++k) {
    const auto& cx = X.core(k);
    const auto& cy = Y.core(k);
    Index dl = (k == 0) ? 1 : cx.dl + cy.dl;
    Index dr = (k == L - 1) ? 1 : cx.dr + cy.dr;
    Core<S> c(dl, dr, d);
    Index ro = (k == 0) ? 0 : cx.dl;  // row offset of the Y block
    Index co = (k == L - 1) ? 0 : cx.dr;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        auto dst = c.phys(i, j);
        dst.block(0, 0, cx.dl, cx.dr) = cx.phys(i, j);
        dst.block(ro, co, cy.dl, cy.dr) += cy.phys(i, j);
      }
    cores.push_back(std::move(c));
  }
  return TensorTrain<S>(std::move(cores));
}

/// Exact operator product A*X; bond dimensions multiply (A-major ordering).
template <class S>
TensorTrain<S> multiply_exact(const TensorTrain<S>& A, const TensorTrain<S>& X) {
  if (A.length() != X.length() || A.phys_dim() != X.phys_dim())
    throw std::invalid_argument("multiply: shape mismatch");
  const Index L = A.length();
  const int d = A.phys_dim();
  std::vector<Core<S>> cores;
  cores.reserve(static_cast<std::size_t>(L));
  for (Index k = 0; k < L; ++k) {
    const auto& ca = A.core(k);
    const auto& cx = X.core(k);
    Core<S> c(ca.dl * cx.dl, ca.dr * cx.dr, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        auto dst = c.phys(i, j);
        for (int s = 0; s < d; ++s) {
          auto am = ca.phys(i, s);
          auto xm = cx.phys(s, j);
          for (Index aa = 0; aa < ca.dl; ++aa)
            for (Index ab = 0; ab < ca.dr; ++ab) {
              S w = am(aa, ab);
              if (w != S(0))
                dst.block(aa * cx.dl, ab * cx.dr, cx.dl, cx.dr) += w * xm;
            }
        }
      }
    cores.push_back(std::move(c));
  }
  return TensorTrain<S>(std::move(cores));
}

/// Transpose of the represented matrix: swap physical row/col on every core.
template <class S>
TensorTrain<S> transpose_phys(const TensorTrain<S>& X) {
  TensorTrain<S> out = X;
  for (Index k = 0; k < X.length(); ++k) {
    const auto& src = X.core(k);
    auto& dst = out.core(k);
    for (int i = 0; i < src.d; ++i)
      for (int j = 0; j < src.d; ++j) dst.phys(i, j) = src.phys(j, i);
  }
  return out;
}

/// Entrywise complex conjugate of the represented matrix.
template <class S>
TensorTrain<S> conj_phys(const TensorTrain<S>& X) {
  TensorTrain<S> out = X;
  if constexpr (is_complex_v<S>) {
    for (Index k = 0; k < X.length(); ++k)
      for (S& v : out.core(k).data) v = std::conj(v);
  }
  return out;
}

template <class S>
TensorTrain<S> adjoint_phys(const TensorTrain<S>& X) {
  return conj_phys(transpose_phys(X));
}

/// J*X and X*J where J is the exchange (anti-diagonal) permutation.
/// J factorizes site-wise as the digit-complement map, so both are
/// bond-dimension-preserving core relabelings.
template <class S>
TensorTrain<S> exchange_left(const TensorTrain<S>& X) {
  TensorTrain<S> out = X;
  for (Index k = 0; k < X.length(); ++k) {
    const auto& src = X.core(k);
    auto& dst = out.core(k);
    for (int i = 0; i < src.d; ++i)
      for (int j = 0; j < src.d; ++j) dst.phys(i, j) = src.phys(src.d - 1 - i, j);
  }
  return out;
}

template <class S>
TensorTrain<S> exchange_right(const TensorTrain<S>& X) {
  TensorTrain<S> out = X;
  for (Index k = 0; k < X.length(); ++k) {
    const auto& src = X.core(k);
    auto& dst = out.core(k);
    for (int i = 0; i < src.d; ++i)
      for (int j = 0; j < src.d; ++j) dst.phys(i, j) = src.phys(i, src.d - 1 - j);
  }
  return out;
}

inline Index dense_dim(Index L, int d) {
  double n = std::pow(double(d), double(L));
  if (n > 1e15) throw std::invalid_argument("dense dimension overflow");
  return static_cast<Index>(n + 0.5);
}

constexpr Index kDefaultDenseCap = 4096;  // d^L cap for dense reconstruction

namespace detail {
// Dense blocks for the chain segment [lo, hi), indexed by (b_lo * D_hi + b_hi).
// Each block has size d^(hi-lo), with site lo as the most significant digit;
// cores are absorbed right to left so each new site lands on top.
template <class S>
std::pair<std::vector<Mat<S>>, Index> contract_segment(const TensorTrain<S>& X,
                                                       Index lo, Index hi) {
  const int d = X.phys_dim();
  const Index dhi = (hi < X.length()) ? X.core(hi).dl : 1;
  Index rows = 1;
  std::vector<Mat<S>> blocks(static_cast<std::size_t>(dhi * dhi), Mat<S>::Zero(1, 1));
  for (Index a = 0; a < dhi; ++a) blocks[static_cast<std::size_t>(a * dhi + a)](0, 0) = S(1);
  for (Index k = hi - 1; k >= lo; --k) {
    const auto& c = X.core(k);
    Index nrows = rows * d;
    std::vector<Mat<S>> next(static_cast<std::size_t>(c.dl * dhi), Mat<S>::Zero(nrows, nrows));
    for (Index bh = 0; bh < dhi; ++bh)
      for (Index b = 0; b < c.dr; ++b) {
        const Mat<S>& cur = blocks[static_cast<std::size_t>(b * dhi + bh)];
        for (Index a = 0; a < c.dl; ++a) {
          Mat<S>& dst = next[static_cast<std::size_t>(a * dhi + bh)];
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
              S w = c.at(a, i, j, b);
              if (w != S(0)) dst.block(i * rows, j * rows, rows, rows) += w * cur;
            }
        }
      }
    blocks.swap(next);
    rows = nrows;
  }
  return {std::move(blocks), rows};
}
}  // namespace detail

/// Full d^L x d^L matrix of the chain contraction. Refused above the cap.
/// The two half-chains are contracted separately and combined as a sum of
/// Kronecker products over the middle bond, keeping intermediates small.
template <class S>
Mat<S> to_dense(const TensorTrain<S>& X, Index cap = kDefaultDenseCap) {
  const Index L = X.length();
  const Index N = dense_dim(L, X.phys_dim());
  if (N > cap) throw std::invalid_argument("to_dense: dimension exceeds cap");

  const Index mid = L / 2;
  auto [left, lrows] = detail::contract_segment(X, 0, mid);   // (1, b) blocks
  auto [right, rrows] = detail::contract_segment(X, mid, L);  // (b, 1) blocks
  const Index dmid = (mid < L) ? X.core(mid).dl : 1;
  Mat<S> out = Mat<S>::Zero(N, N);
  for (Index b = 0; b < dmid; ++b) {
    const Mat<S>& lb = left[static_cast<std::size_t>(b)];
    const Mat<S>& rb = right[static_cast<std::size_t>(b)];
    for (Index i = 0; i < lrows; ++i)
      for (Index j = 0; j < lrows; ++j) {
        S w = lb(i, j);
        if (w != S(0)) out.block(i * rrows, j * rrows, rrows, rrows) += w * rb;
      }
  }
  return out;
}

/// Exact (up to `cutoff`) TT decomposition of a dense d^L x d^L matrix by
/// sequential SVD. Test/oracle support; subject to the same dense cap.
template <class S>
TensorTrain<S> from_dense(const Mat<S>& M, Index L, int d = 2,
                          double cutoff = 1e-14, Index cap = kDefaultDenseCap) {
  const Index N = dense_dim(L, d);
  if (N > cap) throw std::invalid_argument("from_dense: dimension exceeds cap");
  if (M.rows() != N || M.cols() != N) throw std::invalid_argument("from_dense: size mismatch");

  // regroup entries as a (d^2)^L vector over per-site fused indices
  // s_k = i_k*d + j_k, with s_{L-1} fastest
  const int dd = d * d;
  std::vector<S> vec(static_cast<std::size_t>(N) * static_cast<std::size_t>(N));
  for (Index r = 0; r < N; ++r)
    for (Index c = 0; c < N; ++c) {
      Index rr = r, cc = c, idx = 0;
      Index div = N / d;
      for (Index k = 0; k < L; ++k) {
        idx = idx * dd + ((rr / div) * d + (cc / div));
        rr %= div;
        cc %= div;
        div /= d;
      }
      vec[static_cast<std::size_t>(idx)] = M(r, c);
    }

  std::vector<Core<S>> cores;
  cores.reserve(static_cast<std::size_t>(L));
  // W: (dl * dd^(remaining sites)) entries, interpreted as (dl*dd) x tail
  Mat<S> W = Eigen::Map<RowMat<S>>(vec.data(), dd, static_cast<Index>(vec.size()) / dd);
  Index dl = 1;
  for (Index k = 0; k < L - 1; ++k) {
    Eigen::BDCSVD<Mat<S>> svd(W, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    Index rank = 0;
    for (Index t = 0; t < sv.size(); ++t)
      if (sv(t) > 0 && sv(t) > cutoff * smax) ++rank;
    rank = std::max<Index>(rank, 1);
    Core<S> c(dl, rank, d);
    for (Index a = 0; a < dl; ++a)
      for (int s = 0; s < dd; ++s)
        for (Index b = 0; b < rank; ++b) c.at(a, s / d, s % d, b) = svd.matrixU()(a * dd + s, b);
    cores.push_back(std::move(c));
    Mat<S> sv_next = sv.head(rank).asDiagonal() * svd.matrixV().leftCols(rank).adjoint();
    // reshape (rank x dd*tail') into (rank*dd x tail')
    Index tail = sv_next.cols() / dd;
    Mat<S> next(rank * dd, tail);
    for (Index a = 0; a < rank; ++a)
      for (int s = 0; s < dd; ++s)
        for (Index t = 0; t < tail; ++t) next(a * dd + s, t) = sv_next(a, s * tail + t);
    W = std::move(next);
    dl = rank;
  }
  Core<S> last(dl, 1, d);
  for (Index a = 0; a < dl; ++a)
    for (int s = 0; s < dd; ++s) last.at(a, s / d, s % d, 0) = W(a * dd + s, 0);
  cores.push_back(std::move(last));
  return TensorTrain<S>(std::move(cores));
}

inline TensorTrain<cd> to_complex(const TensorTrain<double>& X) {
  std::vector<Core<cd>> cores;
  cores.reserve(static_cast<std::size_t>(X.length()));
  for (Index k = 0; k < X.length(); ++k) {
    const auto& src = X.core(k);
    Core<cd> c(src.dl, src.dr, src.d);
    for (std::size_t n = 0; n < src.data.size(); ++n) c.data[n] = cd(src.data[n], 0.0);
    cores.push_back(std::move(c));
  }
  return TensorTrain<cd>(std::move(cores));
}

inline const TensorTrain<cd>& to_complex(const TensorTrain<cd>& X) { return X; }

}  // namespace ttrace
