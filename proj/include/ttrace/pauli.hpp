#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ttrace/tensor_train.hpp"

namespace ttrace {

enum class Axis : std::uint8_t { X, Y, Z };
enum class PauliOp : std::uint8_t { I, X, Y, Z };

char axis_char(Axis a);
Axis axis_from_char(char c);
PauliOp axis_op(Axis a);
char op_char(PauliOp p);

Eigen::Matrix2cd pauli_matrix(PauliOp p);

/// Kronecker product of per-site Pauli/identity factors times a global
/// phase. The phase is restricted to {1,-1,i,-i}; constructions produce
/// phase 1 so the dense matrix is Hermitian and unitary.
struct PauliString {
  std::vector<PauliOp> labels;
  cd phase = cd(1.0, 0.0);

  Index length() const { return static_cast<Index>(labels.size()); }
  bool is_identity() const;
  std::string label_string() const;  // e.g. "XYXY"
};

PauliString parse_pauli_string(const std::string& labels);

/// True iff the two strings anticommute (odd number of sites carrying
/// different non-identity factors).
bool anticommutes(const PauliString& a, const PauliString& b);
bool anticommutes(const std::vector<PauliOp>& a, const std::vector<PauliOp>& b);

/// Bond-dimension-1 MPO of the string; the phase is folded into site 0.
TensorTrain<cd> pauli_string_to_mpo(const PauliString& r);

/// Dense 2^L x 2^L matrix of the string, built by column action.
Eigen::MatrixXcd dense_pauli_string(const PauliString& r);

}  // namespace ttrace
