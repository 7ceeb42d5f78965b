#include "ttrace/spin.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace ttrace {

bool InteractionSpec::uniform() const {
  for (const auto& t : terms) {
    for (double h : t.couplings)
      if (h != t.couplings.front()) return false;
  }
  return true;
}

void InteractionSpec::validate() const {
  if (length < 1) throw std::invalid_argument("spec: length must be >= 1");
  if (terms.empty()) throw std::invalid_argument("spec: no interaction terms");
  for (const auto& t : terms) {
    if (t.block_length < 1)
      throw std::invalid_argument("spec: block length must be >= 1");
    if (t.block_length > length)
      throw std::invalid_argument("spec: block length exceeds chain length");
    const Index expected = open_offsets(t) + wrap_count(t);
    if (static_cast<Index>(t.couplings.size()) != expected)
      throw std::invalid_argument(
          "spec: term with block length " + std::to_string(t.block_length) + " needs " +
          std::to_string(expected) + " couplings, got " + std::to_string(t.couplings.size()));
  }
}

bool spec_is_real(const InteractionSpec& spec) {
  for (const auto& t : spec.terms)
    if (t.axis == Axis::Y && t.block_length % 2 != 0) return false;
  return true;
}

std::vector<WeightedString> expand_terms(const InteractionSpec& spec) {
  spec.validate();
  std::vector<WeightedString> out;
  const Index L = spec.length;
  for (const auto& t : spec.terms) {
    const PauliOp op = axis_op(t.axis);
    const int len = t.block_length;
    for (Index j = 0; j + len <= L; ++j) {
      WeightedString ws;
      ws.labels.assign(static_cast<std::size_t>(L), PauliOp::I);
      for (int p = 0; p < len; ++p) ws.labels[static_cast<std::size_t>(j + p)] = op;
      ws.coeff = t.couplings[static_cast<std::size_t>(j)];
      out.push_back(std::move(ws));
    }
    for (Index k = 1; k <= spec.wrap_count(t); ++k) {
      WeightedString ws;
      ws.labels.assign(static_cast<std::size_t>(L), PauliOp::I);
      for (Index p = 0; p < k; ++p) ws.labels[static_cast<std::size_t>(p)] = op;
      for (Index p = L - (len - k); p < L; ++p) ws.labels[static_cast<std::size_t>(p)] = op;
      ws.coeff = t.couplings[static_cast<std::size_t>(spec.open_offsets(t) + k - 1)];
      out.push_back(std::move(ws));
    }
  }
  return out;
}

double anticommutation_residual(const InteractionSpec& spec, const PauliString& r) {
  if (r.length() != spec.length)
    throw std::invalid_argument("anticommutation_residual: length mismatch");
  // combine coefficients of identical strings first; distinct Pauli strings
  // are orthogonal so the norms split exactly
  std::map<std::vector<PauliOp>, double> combined;
  for (const auto& ws : expand_terms(spec)) combined[ws.labels] += ws.coeff;
  double all_sq = 0, commuting_sq = 0;
  for (const auto& [labels, coeff] : combined) {
    if (coeff == 0.0) continue;
    all_sq += coeff * coeff;
    if (!anticommutes(labels, r.labels)) commuting_sq += coeff * coeff;
  }
  if (all_sq == 0.0) return 0.0;
  return 2.0 * std::sqrt(commuting_sq / all_sq);
}

namespace {

// deterministic tie-breaking: x -> z, y -> x, z -> x
Axis flip_axis(Axis a) { return a == Axis::X ? Axis::Z : Axis::X; }

Axis remaining_axis(Axis a, Axis b) {
  for (Axis c : {Axis::X, Axis::Y, Axis::Z})
    if (c != a && c != b) return c;
  return Axis::X;  // unreachable for a != b
}

PauliString uniform_string(Index L, Axis ax) {
  PauliString r;
  r.labels.assign(static_cast<std::size_t>(L), axis_op(ax));
  return r;
}

// one sigma_ax per length-i cell, identity padding: (I^(i-1) ax)^(L/i) I^(L%i)
PauliString grid_string(Index L, int i, Axis ax) {
  PauliString r;
  r.labels.assign(static_cast<std::size_t>(L), PauliOp::I);
  for (Index p = i; p <= L; p += i) r.labels[static_cast<std::size_t>(p - 1)] = axis_op(ax);
  return r;
}

// sigma_long_ax on the short grid, sigma_short_ax on the long grid,
// the remaining axis where the grids coincide
PauliString mixed_grid_string(Index L, Axis long_ax, int long_len, Axis short_ax,
                              int short_len) {
  const Axis g = remaining_axis(long_ax, short_ax);
  PauliString r;
  r.labels.assign(static_cast<std::size_t>(L), PauliOp::I);
  for (Index p = 1; p <= L; ++p) {
    const bool on_short = p % short_len == 0;
    const bool on_long = p % long_len == 0;
    if (on_short && on_long)
      r.labels[static_cast<std::size_t>(p - 1)] = axis_op(g);
    else if (on_short)
      r.labels[static_cast<std::size_t>(p - 1)] = axis_op(long_ax);
    else if (on_long)
      r.labels[static_cast<std::size_t>(p - 1)] = axis_op(short_ax);
  }
  return r;
}

// sigma_beta everywhere except sigma_alpha at multiples of k
PauliString cell_string(Index L, int k, Axis alpha, Axis beta) {
  PauliString r;
  r.labels.assign(static_cast<std::size_t>(L), axis_op(beta));
  for (Index p = k; p <= L; p += k) r.labels[static_cast<std::size_t>(p - 1)] = axis_op(alpha);
  return r;
}

bool all_odd(const InteractionSpec& spec) {
  return std::all_of(spec.terms.begin(), spec.terms.end(),
                     [](const InteractionTerm& t) { return t.block_length % 2 == 1; });
}

}  // namespace

std::optional<PauliString> construct_chiral_unitary(const InteractionSpec& spec) {
  spec.validate();
  const Index L = spec.length;
  const bool open = spec.boundary == Boundary::Open;

  std::set<Axis> axes;
  for (const auto& t : spec.terms) axes.insert(t.axis);

  std::vector<PauliString> candidates;
  auto push = [&](PauliString r) {
    if (!r.is_identity()) candidates.push_back(std::move(r));
  };

  if (spec.terms.size() == 1) {
    const auto& t = spec.terms[0];
    if (open) push(grid_string(L, t.block_length, flip_axis(t.axis)));
    if (!open && t.block_length % 2 == 1) push(uniform_string(L, flip_axis(t.axis)));
  }

  if (spec.terms.size() == 2) {
    const auto& a = spec.terms[0];
    const auto& b = spec.terms[1];
    const bool distinct = a.axis != b.axis;
    if (open && distinct) {
      if (a.block_length == b.block_length) {
        push(grid_string(L, a.block_length, remaining_axis(a.axis, b.axis)));
      } else {
        const auto& lng = a.block_length > b.block_length ? a : b;
        const auto& shr = a.block_length > b.block_length ? b : a;
        push(mixed_grid_string(L, lng.axis, lng.block_length, shr.axis, shr.block_length));
      }
    }
    if (open && !distinct) {
      if (a.block_length % 2 == 1 && b.block_length % 2 == 1) {
        if (a.block_length == b.block_length)
          push(grid_string(L, a.block_length, flip_axis(a.axis)));
        else
          push(uniform_string(L, flip_axis(a.axis)));
      }
      const int big = std::max(a.block_length, b.block_length);
      const int small = std::min(a.block_length, b.block_length);
      if (big != small && big % small == 0 && (big / small) % 2 == 1)
        push(grid_string(L, small, flip_axis(a.axis)));
    }
    if (!open && distinct && a.block_length % 2 == 1 && b.block_length % 2 == 1)
      push(uniform_string(L, remaining_axis(a.axis, b.axis)));
  }

  if (spec.terms.size() == 3 && open && axes.size() == 3) {
    // role assignment (alpha,i) (beta,k) (gamma,m): i < k, i and m odd
    for (std::size_t ai = 0; ai < 3; ++ai)
      for (std::size_t bi = 0; bi < 3; ++bi) {
        if (bi == ai) continue;
        const std::size_t ci = 3 - ai - bi;
        const auto& ta = spec.terms[ai];
        const auto& tb = spec.terms[bi];
        const auto& tc = spec.terms[ci];
        if (ta.block_length % 2 == 1 && tc.block_length % 2 == 1 &&
            ta.block_length < tb.block_length)
          push(cell_string(L, tb.block_length, ta.axis, tb.axis));
      }
  }

  if (spec.terms.size() == 3 && open && axes.size() == 2 && all_odd(spec)) {
    // one axis appears once (length i), the other twice; hypotheses ask i < k
    for (std::size_t ai = 0; ai < 3; ++ai) {
      const auto& ta = spec.terms[ai];
      std::vector<int> other_lens;
      Axis other_axis = ta.axis;
      bool lone = true;
      for (std::size_t t = 0; t < 3; ++t) {
        if (t == ai) continue;
        if (spec.terms[t].axis == ta.axis) { lone = false; break; }
        other_axis = spec.terms[t].axis;
        other_lens.push_back(spec.terms[t].block_length);
      }
      if (!lone || other_lens.size() != 2) continue;
      if (ta.block_length < std::max(other_lens[0], other_lens[1]))
        push(uniform_string(L, remaining_axis(ta.axis, other_axis)));
    }
  }

  // generalized odd-length families: at most two distinct axes, all blocks odd
  if (axes.size() <= 2 && all_odd(spec)) {
    if (axes.size() == 2) {
      auto it = axes.begin();
      const Axis a = *it++;
      const Axis b = *it;
      push(uniform_string(L, remaining_axis(a, b)));
    } else {
      push(uniform_string(L, flip_axis(*axes.begin())));
    }
  }

  for (auto& r : candidates) {
    bool ok = true;
    for (const auto& ws : expand_terms(spec)) {
      if (ws.coeff == 0.0) continue;
      if (!anticommutes(ws.labels, r.labels)) { ok = false; break; }
    }
    if (ok) return r;
  }
  return std::nullopt;
}

}  // namespace ttrace
