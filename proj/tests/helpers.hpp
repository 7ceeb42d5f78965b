#pragma once

#include <random>
#include <vector>

#include "ttrace/oracle.hpp"
#include "ttrace/spin.hpp"
#include "ttrace/tensor_train.hpp"

namespace ttrace::test {

/// Random tensor train with the given internal bond profile (size L-1).
template <class S>
TensorTrain<S> random_tt(std::mt19937& rng, Index L, const std::vector<Index>& bonds,
                         int d = 2) {
  std::normal_distribution<double> g;
  std::vector<Core<S>> cores;
  for (Index k = 0; k < L; ++k) {
    const Index dl = k == 0 ? 1 : bonds[static_cast<std::size_t>(k - 1)];
    const Index dr = k == L - 1 ? 1 : bonds[static_cast<std::size_t>(k)];
    Core<S> c(dl, dr, d);
    for (S& v : c.data) {
      if constexpr (is_complex_v<S>)
        v = S(g(rng), g(rng));
      else
        v = g(rng);
    }
    cores.push_back(std::move(c));
  }
  return TensorTrain<S>(std::move(cores));
}

template <class S>
TensorTrain<S> random_tt(std::mt19937& rng, Index L, Index bond, int d = 2) {
  return random_tt<S>(rng, L, std::vector<Index>(static_cast<std::size_t>(L - 1), bond), d);
}

/// Transverse-field Ising chain with uniform couplings.
inline InteractionSpec tfim_spec(Index L, double J = 1.0, double g = 1.0,
                                 Boundary boundary = Boundary::Open) {
  InteractionSpec spec;
  spec.length = L;
  spec.boundary = boundary;
  InteractionTerm xx;
  xx.axis = Axis::X;
  xx.block_length = 2;
  xx.couplings.assign(static_cast<std::size_t>(L - 1 + (boundary == Boundary::Periodic ? 1 : 0)), J);
  InteractionTerm z;
  z.axis = Axis::Z;
  z.block_length = 1;
  z.couplings.assign(static_cast<std::size_t>(L), g);
  spec.terms = {xx, z};
  return spec;
}

/// Random dense Hermitian matrix of dimension 2^L.
inline Eigen::MatrixXcd random_hermitian(std::mt19937& rng, int L) {
  std::normal_distribution<double> g;
  const Index N = Index(1) << L;
  Eigen::MatrixXcd m(N, N);
  for (Index r = 0; r < N; ++r)
    for (Index c = 0; c < N; ++c) m(r, c) = cd(g(rng), g(rng));
  return (m + m.adjoint()) / 2.0;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace ttrace::test
