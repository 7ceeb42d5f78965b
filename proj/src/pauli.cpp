#include "ttrace/pauli.hpp"

#include <stdexcept>

namespace ttrace {

char axis_char(Axis a) {
  switch (a) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
  }
  return '?';
}

Axis axis_from_char(char c) {
  switch (c) {
    case 'x': case 'X': return Axis::X;
    case 'y': case 'Y': return Axis::Y;
    case 'z': case 'Z': return Axis::Z;
  }
  throw std::invalid_argument(std::string("unknown Pauli axis '") + c + "'");
}

PauliOp axis_op(Axis a) {
  switch (a) {
    case Axis::X: return PauliOp::X;
    case Axis::Y: return PauliOp::Y;
    case Axis::Z: return PauliOp::Z;
  }
  return PauliOp::I;
}

char op_char(PauliOp p) {
  switch (p) {
    case PauliOp::I: return 'I';
    case PauliOp::X: return 'X';
    case PauliOp::Y: return 'Y';
    case PauliOp::Z: return 'Z';
  }
  return '?';
}

Eigen::Matrix2cd pauli_matrix(PauliOp p) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (p) {
    case PauliOp::I: m(0, 0) = 1; m(1, 1) = 1; break;
    case PauliOp::X: m(0, 1) = 1; m(1, 0) = 1; break;
    case PauliOp::Y: m(0, 1) = cd(0, -1); m(1, 0) = cd(0, 1); break;
    case PauliOp::Z: m(0, 0) = 1; m(1, 1) = -1; break;
  }
  return m;
}

bool PauliString::is_identity() const {
  for (PauliOp p : labels)
    if (p != PauliOp::I) return false;
  return true;
}

std::string PauliString::label_string() const {
  std::string s;
  s.reserve(labels.size());
  for (PauliOp p : labels) s.push_back(op_char(p));
  return s;
}

PauliString parse_pauli_string(const std::string& labels) {
  PauliString r;
  r.labels.reserve(labels.size());
  for (char c : labels) {
    switch (c) {
      case 'I': case 'i': r.labels.push_back(PauliOp::I); break;
      case 'X': case 'x': r.labels.push_back(PauliOp::X); break;
      case 'Y': case 'y': r.labels.push_back(PauliOp::Y); break;
      case 'Z': case 'z': r.labels.push_back(PauliOp::Z); break;
      default:
        throw std::invalid_argument(std::string("unknown Pauli label '") + c + "'");
    }
  }
  return r;
}

bool anticommutes(const std::vector<PauliOp>& a, const std::vector<PauliOp>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("anticommutes: length mismatch");
  int conflicts = 0;
  for (std::size_t s = 0; s < a.size(); ++s)
    if (a[s] != PauliOp::I && b[s] != PauliOp::I && a[s] != b[s]) ++conflicts;
  return conflicts % 2 == 1;
}

bool anticommutes(const PauliString& a, const PauliString& b) {
  return anticommutes(a.labels, b.labels);
}

TensorTrain<cd> pauli_string_to_mpo(const PauliString& r) {
  if (r.labels.empty()) throw std::invalid_argument("pauli_string_to_mpo: empty string");
  std::vector<Core<cd>> cores;
  cores.reserve(r.labels.size());
  for (std::size_t s = 0; s < r.labels.size(); ++s) {
    Core<cd> c(1, 1, 2);
    Eigen::Matrix2cd m = pauli_matrix(r.labels[s]);
    if (s == 0) m *= r.phase;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) c.at(0, i, j, 0) = m(i, j);
    cores.push_back(std::move(c));
  }
  return TensorTrain<cd>(std::move(cores));
}

Eigen::MatrixXcd dense_pauli_string(const PauliString& r) {
  const int L = static_cast<int>(r.labels.size());
  const Index N = dense_dim(L, 2);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
  for (Index col = 0; col < N; ++col) {
    Index row = col;
    cd phase = r.phase;
    for (int s = 0; s < L; ++s) {
      const Index bitpos = L - 1 - s;  // site 0 owns the most significant bit
      const Index bit = (col >> bitpos) & 1;
      switch (r.labels[static_cast<std::size_t>(s)]) {
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
    M(row, col) += phase;
  }
  return M;
}

}  // namespace ttrace
