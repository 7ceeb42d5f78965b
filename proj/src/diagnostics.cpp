#include "ttrace/diagnostics.hpp"

namespace ttrace {

std::string symmetry_kind_name(SymmetryKind k) {
  switch (k) {
    case SymmetryKind::Symmetric: return "symmetric";
    case SymmetryKind::Persymmetric: return "persymmetric";
    case SymmetryKind::Centrosymmetric: return "centrosymmetric";
    case SymmetryKind::Hermitian: return "hermitian";
    case SymmetryKind::Perhermitian: return "perhermitian";
    case SymmetryKind::Centrohermitian: return "centrohermitian";
  }
  return "?";
}

const std::vector<SymmetryKind>& all_symmetry_kinds() {
  static const std::vector<SymmetryKind> kinds = {
      SymmetryKind::Symmetric,      SymmetryKind::Persymmetric,
      SymmetryKind::Centrosymmetric, SymmetryKind::Hermitian,
      SymmetryKind::Perhermitian,   SymmetryKind::Centrohermitian,
  };
  return kinds;
}

AlphaMonitorReport monitor_alphas(const std::vector<double>& alphas, double beta1, double tol) {
  AlphaMonitorReport out;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    if (std::abs(alphas[i]) > tol * beta1)
      out.warnings.push_back({static_cast<int>(i) + 1, alphas[i]});
  return out;
}

AlphaMonitorReport monitor_alphas(const JacobiMatrix& j, double tol) {
  return monitor_alphas(j.alphas, j.beta1, tol);
}

}  // namespace ttrace
