#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttrace/compression.hpp"
#include "ttrace/pauli.hpp"
#include "ttrace/tensor_train.hpp"

namespace ttrace {

enum class Boundary : std::uint8_t { Open, Periodic };

/// One interaction family: blocks of `block_length` consecutive sigma_axis
/// factors, one coupling per lattice offset. For periodic chains the open
/// couplings (L - block_length + 1 of them) are followed by block_length - 1
/// wrap couplings.
struct InteractionTerm {
  Axis axis = Axis::Z;
  int block_length = 1;
  std::vector<double> couplings;
};

struct InteractionSpec {
  Index length = 0;
  Boundary boundary = Boundary::Open;
  std::vector<InteractionTerm> terms;

  Index open_offsets(const InteractionTerm& t) const { return length - t.block_length + 1; }
  Index wrap_count(const InteractionTerm& t) const {
    return boundary == Boundary::Periodic ? t.block_length - 1 : 0;
  }
  bool uniform() const;
  void validate() const;  // throws std::invalid_argument
};

/// True iff the Hamiltonian matrix is real: every sigma_y family has blocks
/// of even length (an even number of y factors per string).
bool spec_is_real(const InteractionSpec& spec);

/// Hamiltonian terms expanded to Pauli strings with coefficients.
struct WeightedString {
  std::vector<PauliOp> labels;
  double coeff = 0.0;
};
std::vector<WeightedString> expand_terms(const InteractionSpec& spec);

namespace detail {
// Site matrix of the axis in the requested scalar type. For real storage,
// sigma_y is replaced by the real matrix i*sigma_y; the calling automaton
// compensates by scaling the block coupling with (-1)^(block_length/2),
// valid whenever the y count per string is even.
template <class S>
Eigen::Matrix<S, 2, 2> term_site_matrix(Axis axis) {
  Eigen::Matrix2cd m = pauli_matrix(axis_op(axis));
  if constexpr (is_complex_v<S>) {
    return m;
  } else {
    Eigen::Matrix<double, 2, 2> r;
    if (axis == Axis::Y) {
      r << 0, 1, -1, 0;  // i*sigma_y
    } else {
      r = m.real();
    }
    return r;
  }
}

template <class S>
double term_phase(Axis axis, int block_length) {
  if constexpr (!is_complex_v<S>) {
    if (axis == Axis::Y) return (block_length / 2) % 2 == 0 ? 1.0 : -1.0;
  }
  return 1.0;
}
}  // namespace detail

/// Exact MPO of the spin Hamiltonian via a finite-automaton core
/// construction; periodic wrap terms are added as bond-1 strings.
/// Real storage requires spec_is_real(spec).
template <class S = double>
TensorTrain<S> build_hamiltonian(const InteractionSpec& spec) {
  spec.validate();
  if constexpr (!is_complex_v<S>) {
    if (!spec_is_real(spec))
      throw std::invalid_argument(
          "build_hamiltonian: spec has odd-length y blocks; use complex scalars");
  }
  const Index L = spec.length;
  const int d = 2;

  // automaton states: 0 = no block started, last = block finished,
  // term t with block length >= 2 owns progress slots
  // progress_base[t]+1 .. progress_base[t]+block_length-1
  Index next_slot = 1;
  std::vector<Index> progress_base(spec.terms.size(), 0);
  for (std::size_t t = 0; t < spec.terms.size(); ++t) {
    progress_base[t] = next_slot - 1;
    next_slot += spec.terms[t].block_length - 1;
  }
  const Index states = next_slot + 1;
  const Index start = 0, done = states - 1;

  std::vector<Core<S>> cores;
  cores.reserve(static_cast<std::size_t>(L));
  for (Index s = 0; s < L; ++s) {
    Mat<S> site[2][2];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) site[i][j] = Mat<S>::Zero(states, states);
    for (int i = 0; i < d; ++i) {
      site[i][i](start, start) = S(1);
      site[i][i](done, done) = S(1);
    }
    for (std::size_t t = 0; t < spec.terms.size(); ++t) {
      const auto& term = spec.terms[t];
      const int len = term.block_length;
      Eigen::Matrix<S, 2, 2> m = detail::term_site_matrix<S>(term.axis);
      const double phase = detail::term_phase<S>(term.axis, len);
      if (s + len <= L) {
        const S w = S(phase * term.couplings[static_cast<std::size_t>(s)]);
        const Index first_target = (len == 1) ? done : progress_base[t] + 1;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) site[i][j](start, first_target) += w * m(i, j);
      }
      for (int p = 1; p + 1 <= len - 1; ++p)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            site[i][j](progress_base[t] + p, progress_base[t] + p + 1) += m(i, j);
      if (len >= 2)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) site[i][j](progress_base[t] + len - 1, done) += m(i, j);
    }
    const Index dl = (s == 0) ? 1 : states;
    const Index dr = (s == L - 1) ? 1 : states;
    Core<S> c(dl, dr, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (s == 0 && s == L - 1)
          c.phys(i, j)(0, 0) = site[i][j](start, done);
        else if (s == 0)
          c.phys(i, j) = site[i][j].row(start);
        else if (s == L - 1)
          c.phys(i, j) = site[i][j].col(done);
        else
          c.phys(i, j) = site[i][j];
      }
    cores.push_back(std::move(c));
  }
  TensorTrain<S> H(std::move(cores));

  // periodic wrap strings, one bond-1 MPO each
  if (spec.boundary == Boundary::Periodic) {
    for (const auto& term : spec.terms) {
      const int len = term.block_length;
      Eigen::Matrix<S, 2, 2> m = detail::term_site_matrix<S>(term.axis);
      const double phase = detail::term_phase<S>(term.axis, len);
      for (int k = 1; k <= len - 1; ++k) {
        const double h = term.couplings[static_cast<std::size_t>(spec.open_offsets(term) + k - 1)];
        std::vector<Core<S>> wrap;
        wrap.reserve(static_cast<std::size_t>(L));
        for (Index s = 0; s < L; ++s) {
          Core<S> c(1, 1, d);
          const bool head = s < k;
          const bool tail = s >= L - (len - k);
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
              c.at(0, i, j, 0) = (head || tail) ? m(i, j) : (i == j ? S(1) : S(0));
          wrap.push_back(std::move(c));
        }
        TensorTrain<S> W(std::move(wrap));
        H = add_exact(H, scalar_multiply(S(phase * h), W));
      }
    }
  }
  return H;
}

/// Constructive chiral-symmetry detector: dispatches over the known
/// Hamiltonian families, builds the candidate sign-flipping string for the
/// first family whose hypotheses match, and returns it only if it passes
/// the exact symbol-algebra anticommutation check against every term.
std::optional<PauliString> construct_chiral_unitary(const InteractionSpec& spec);

/// ||RH + HR||_F / ||H||_F computed exactly in Pauli symbol algebra:
/// the residual is 2 * (norm of the commuting part) / (norm of H).
double anticommutation_residual(const InteractionSpec& spec, const PauliString& r);

/// Same residual in MPO arithmetic. Products are compressed per `settings`
/// (exact by default since R has bond dimension 1).
template <class S>
double verify_anticommutation(const TensorTrain<S>& H, const PauliString& r,
                              const CompressionSettings& settings = exact_settings()) {
  if (H.length() != r.length()) throw std::invalid_argument("verify_anticommutation: length mismatch");
  const TensorTrain<cd> Hc = to_complex(H);
  const TensorTrain<cd> R = pauli_string_to_mpo(r);
  auto rh = multiply(R, Hc, settings);
  auto hr = multiply(Hc, R, settings);
  const double hnorm = frobenius_norm(Hc);
  if (hnorm == 0.0) return 0.0;
  return canonical_norm(add_exact(rh.value, hr.value)) / hnorm;
}

}  // namespace ttrace
