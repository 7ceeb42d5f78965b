#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ttrace {

/// Scalar function applied to Ritz values. Built-ins cover the partition
/// function workload (e^{-beta x}), plain powers, identity, and a tabulated
/// function with linear interpolation (clamped outside the table range).
class SpectralFunction {
 public:
  SpectralFunction() : SpectralFunction(identity()) {}

  static SpectralFunction identity();
  static SpectralFunction exp_neg_beta(double beta);
  static SpectralFunction power(double exponent);
  static SpectralFunction tabulated(std::vector<double> x, std::vector<double> fx);

  double operator()(double x) const { return fn_(x); }
  const std::string& name() const { return name_; }
  const std::string& describe() const { return description_; }

 private:
  SpectralFunction(std::string name, std::string description,
                   std::function<double(double)> fn)
      : name_(std::move(name)), description_(std::move(description)), fn_(std::move(fn)) {}

  std::string name_;
  std::string description_;
  std::function<double(double)> fn_;
};

}  // namespace ttrace
