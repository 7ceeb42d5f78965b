#include "ttrace/spectral_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ttrace {

SpectralFunction SpectralFunction::identity() {
  return SpectralFunction("identity", "identity", [](double x) { return x; });
}

SpectralFunction SpectralFunction::exp_neg_beta(double beta) {
  std::ostringstream d;
  d << "exp_neg_beta(beta=" << beta << ")";
  return SpectralFunction("exp_neg_beta", d.str(),
                          [beta](double x) { return std::exp(-beta * x); });
}

SpectralFunction SpectralFunction::power(double exponent) {
  std::ostringstream d;
  d << "power(exponent=" << exponent << ")";
  return SpectralFunction("power", d.str(),
                          [exponent](double x) { return std::pow(x, exponent); });
}

SpectralFunction SpectralFunction::tabulated(std::vector<double> x, std::vector<double> fx) {
  if (x.size() != fx.size() || x.size() < 2)
    throw std::invalid_argument("tabulated: need at least two (x, f) samples");
  if (!std::is_sorted(x.begin(), x.end()))
    throw std::invalid_argument("tabulated: x samples must be sorted");
  auto eval = [x = std::move(x), fx = std::move(fx)](double v) {
    if (v <= x.front()) return fx.front();
    if (v >= x.back()) return fx.back();
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    const std::size_t hi = static_cast<std::size_t>(it - x.begin());
    const double t = (v - x[hi - 1]) / (x[hi] - x[hi - 1]);
    return (1.0 - t) * fx[hi - 1] + t * fx[hi];
  };
  return SpectralFunction("tabulated", "tabulated", std::move(eval));
}

}  // namespace ttrace
