#pragma once

#include <stdexcept>
#include <string>

namespace ttrace {

/// Thrown when a computation produces results that violate a numerical
/// precondition (broken hermiticity, negative norm, failed eigensolve).
/// Distinct from std::invalid_argument, which covers structural misuse.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration file / schema violations. Carries a line number when known.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what, int line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace ttrace
