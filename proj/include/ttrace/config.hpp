#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ttrace/compression.hpp"
#include "ttrace/diagnostics.hpp"
#include "ttrace/jacobi.hpp"
#include "ttrace/spectral_function.hpp"
#include "ttrace/spin.hpp"

namespace ttrace {

/// Experiment configuration: sectioned key/value text, schema version 1.
/// Unknown sections or keys are rejected. See docs/config.md for the full
/// schema and an annotated example.
struct ExperimentConfig {
  int version = 1;

  struct TermSpec {
    Axis axis = Axis::Z;
    int block_length = 1;
    std::vector<double> couplings;  // single entry means uniform
  };
  struct Model {
    Index length = 4;
    Boundary boundary = Boundary::Open;
    std::vector<TermSpec> terms;
  } model;

  struct Function {
    std::string name = "exp_neg_beta";
    double beta = 1.0;
    double exponent = 2.0;
    std::string table;  // CSV path of x,f(x) rows for name = tabulated
  } function;

  struct Run {
    LanczosMode mode = LanczosMode::Auto;
    int max_iterations = 100;
    double rel_change_tol = 1e-6;
    double breakdown_tol = 1e-12;
    Index max_bond = 32;
    double svd_cutoff = 1e-14;
    int max_sweeps = 4;
    double sweep_tol = 1e-8;
    double hermiticity_tol = 1e-8;
    std::uint64_t seed = 0;
  } run;

  struct Output {
    std::string csv;
    std::string summary;
    std::string checkpoint_dir;
    int checkpoint_interval = 0;
  } output;

  struct Diagnostics {
    bool enabled = true;
    int trace_every = 1;
    int alpha_every = 1;
    int commutation_every = 5;
    int symmetry_every = 5;
    double warn_tol = 1e-6;
  } diagnostics;

  struct Bench {
    std::vector<Index> lengths = {10, 20, 30};
    std::vector<Index> max_bonds = {32};
    int iterations = 50;
    int repetitions = 5;
    std::vector<LanczosMode> modes = {LanczosMode::Vanilla, LanczosMode::ChiralFast};
    bool parallel = false;
  } bench;

  /// Parse with optional "section.key=value" overrides applied afterwards
  /// (last one wins). Throws config_error with a line number on schema
  /// violations.
  static ExperimentConfig parse(std::istream& is,
                                const std::vector<std::string>& overrides = {});
  static ExperimentConfig parse_file(const std::string& path,
                                     const std::vector<std::string>& overrides = {});
  static ExperimentConfig parse_string(const std::string& text,
                                       const std::vector<std::string>& overrides = {});

  /// Canonical text form; parse(serialize()) reproduces the config and
  /// serialize is idempotent across a parse/serialize round trip.
  std::string serialize() const;

  InteractionSpec interaction_spec() const;  // materializes uniform couplings
  SpectralFunction spectral_function() const;
  CompressionSettings compression_settings() const;
  StoppingCriteria stopping_criteria() const;
  MonitorSettings monitor_settings() const;
};

}  // namespace ttrace
