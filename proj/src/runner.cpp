#include "ttrace/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "ttrace/errors.hpp"
#include "ttrace/krylov.hpp"
#include "ttrace/oracle.hpp"
#include "ttrace/serialization.hpp"

namespace ttrace {

namespace fs = std::filesystem;

ResolvedMode resolve_mode(LanczosMode requested, const InteractionSpec& spec) {
  ResolvedMode out;
  out.witness = construct_chiral_unitary(spec);
  if (requested != LanczosMode::Auto) {
    out.mode = requested;
    return out;
  }
  if (out.witness) {
    out.mode = LanczosMode::ChiralFast;
    out.note = "auto: verified chiral witness " + out.witness->label_string();
  } else {
    out.mode = LanczosMode::Vanilla;
    out.note =
        "auto: no verified chiral witness for this spec (absence does not rule out a "
        "symmetric spectrum); running vanilla";
  }
  return out;
}

namespace {

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

template <class S>
CheckpointSink<S> make_checkpoint_sink(const std::string& dir, LanczosMode mode) {
  return [dir, mode](const KrylovState<S>& state) {
    fs::create_directories(dir);
    if (state.u_prev) save_ttop_file(dir + "/u_prev.ttop", *state.u_prev);
    save_ttop_file(dir + "/u_curr.ttop", *state.u_curr);
    save_ttop_file(dir + "/v.ttop", *state.v);
    std::ofstream man(dir + "/manifest.txt");
    man << "ttck_version = 1\n";
    man << "iteration = " << state.iteration << "\n";
    man << "mode = " << mode_name(mode) << "\n";
    man.precision(17);
    man << "beta1 = " << state.jacobi->beta1 << "\n";
    man << "alphas = " << join_doubles(state.jacobi->alphas) << "\n";
    man << "betas = " << join_doubles(state.jacobi->betas) << "\n";
    man << "u_prev = " << (state.u_prev ? "u_prev.ttop" : "") << "\n";
    man << "u_curr = u_curr.ttop\n";
    man << "v = v.ttop\n";
  };
}

template <class S>
QuadratureReport run_typed(const ExperimentConfig& config, const InteractionSpec& spec,
                           const ResolvedMode& resolved) {
  const TensorTrain<S> H = build_hamiltonian<S>(spec);
  RunHooks<S> hooks;
  hooks.monitors = config.monitor_settings();
  hooks.hermiticity_tol = config.run.hermiticity_tol;
  if (!config.output.checkpoint_dir.empty() && config.output.checkpoint_interval > 0) {
    hooks.checkpoint = make_checkpoint_sink<S>(config.output.checkpoint_dir, resolved.mode);
    hooks.checkpoint_every = config.output.checkpoint_interval;
  }
  QuadratureReport report = run_lanczos(H, config.spectral_function(), resolved.mode,
                                        config.compression_settings(),
                                        config.stopping_criteria(), hooks);
  if (resolved.witness) report.witness = resolved.witness->label_string();
  if (!resolved.note.empty()) report.warnings.insert(report.warnings.begin(), resolved.note);
  return report;
}

}  // namespace

QuadratureReport run_experiment(const ExperimentConfig& config) {
  const InteractionSpec spec = config.interaction_spec();
  const ResolvedMode resolved = resolve_mode(config.run.mode, spec);
  if (spec_is_real(spec)) return run_typed<double>(config, spec, resolved);
  return run_typed<cd>(config, spec, resolved);
}

BenchPoint bench_point(const ExperimentConfig& config, LanczosMode mode, Index length,
                       Index max_bond, int repetition) {
  ExperimentConfig c = config;
  c.model.length = length;
  for (auto& t : c.model.terms)
    if (t.couplings.size() != 1)
      throw config_error("bench requires uniform (single-value) term couplings");
  c.run.max_bond = max_bond;
  c.run.max_iterations = config.bench.iterations;
  c.run.rel_change_tol = 0;  // fixed iteration count
  c.run.mode = mode;
  c.diagnostics.enabled = false;  // timing runs are monitor-free
  c.output = {};

  const QuadratureReport report = run_experiment(c);
  BenchPoint p;
  p.mode = mode;
  p.length = length;
  p.max_bond = max_bond;
  p.repetition = repetition;
  p.iterations = report.iterations;
  p.estimate = report.estimate;
  double total = 0, mn = 0, mean = 0;
  int counted = 0;
  for (const auto& row : report.rows) {
    total += row.wall_ms;
    if (row.iteration == 1) continue;  // warm-up excluded from statistics
    mean += row.wall_ms;
    mn = counted == 0 ? row.wall_ms : std::min(mn, row.wall_ms);
    ++counted;
  }
  p.total_s = total / 1e3;
  p.mean_iter_ms = counted ? mean / counted : total / std::max(1, p.iterations);
  p.min_iter_ms = counted ? mn : p.mean_iter_ms;
  return p;
}

std::string bench_csv_header() {
  return "mode,length,max_bond,repetition,iterations,mean_iter_ms,min_iter_ms,total_s,"
         "estimate";
}

std::string bench_csv_row(const BenchPoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << mode_name(p.mode) << ',' << p.length << ',' << p.max_bond << ',' << p.repetition
     << ',' << p.iterations << ',' << p.mean_iter_ms << ',' << p.min_iter_ms << ','
     << p.total_s << ',' << p.estimate;
  return os.str();
}

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const QuadratureReport report = run_experiment(config);
    if (!config.output.csv.empty()) {
      std::ofstream csv(config.output.csv);
      if (!csv) throw config_error("cannot open " + config.output.csv + " for writing");
      report.write_csv(csv);
    }
    if (!config.output.summary.empty()) {
      std::ofstream summary(config.output.summary);
      if (!summary) throw config_error("cannot open " + config.output.summary + " for writing");
      report.write_summary(summary);
    }
    report.write_summary(out);
    return 0;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const numerical_error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}

int cmd_bench(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    struct Point {
      LanczosMode mode;
      Index length, max_bond;
      int rep;
    };
    std::vector<Point> grid;
    // modes innermost so each repetition compares them back to back
    for (int rep = 0; rep < config.bench.repetitions; ++rep)
      for (Index L : config.bench.lengths)
        for (Index D : config.bench.max_bonds)
          for (LanczosMode m : config.bench.modes) grid.push_back({m, L, D, rep});

    std::vector<BenchPoint> rows(grid.size());
    if (config.bench.parallel) {
      // opt-in and only sensible for non-timing runs
      std::vector<std::future<void>> jobs;
      for (std::size_t i = 0; i < grid.size(); ++i)
        jobs.push_back(std::async(std::launch::async, [&, i] {
          const auto& g = grid[i];
          rows[i] = bench_point(config, g.mode, g.length, g.max_bond, g.rep);
        }));
      for (auto& j : jobs) j.get();
    } else {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& g = grid[i];
        rows[i] = bench_point(config, g.mode, g.length, g.max_bond, g.rep);
      }
    }

    std::ostringstream csv;
    csv << bench_csv_header() << '\n';
    for (const auto& r : rows) csv << bench_csv_row(r) << '\n';
    if (!config.output.csv.empty()) {
      std::ofstream f(config.output.csv);
      if (!f) throw config_error("cannot open " + config.output.csv + " for writing");
      f << csv.str();
    }
    out << csv.str();
    return 0;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const numerical_error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}

namespace {

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int cmd_diagnose(const ExperimentConfig& config, const std::string& checkpoint_dir,
                 std::ostream& out, std::ostream& err) {
  try {
    const std::string manifest_path = checkpoint_dir + "/manifest.txt";
    std::ifstream man(manifest_path);
    if (!man) throw std::runtime_error("cannot open " + manifest_path);
    JacobiMatrix jacobi;
    std::string u_curr_file, u_prev_file, v_file, line;
    int iteration = 0;
    while (std::getline(man, line)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(0, line.find_first_of(" ="));
      std::string value = line.substr(eq + 1);
      while (!value.empty() && value.front() == ' ') value.erase(value.begin());
      if (key == "beta1") jacobi.beta1 = std::stod(value);
      else if (key == "alphas") jacobi.alphas = parse_double_list(value);
      else if (key == "betas") jacobi.betas = parse_double_list(value);
      else if (key == "iteration") iteration = std::stoi(value);
      else if (key == "u_curr") u_curr_file = value;
      else if (key == "u_prev") u_prev_file = value;
      else if (key == "v") v_file = value;
    }
    if (u_curr_file.empty()) throw std::runtime_error("manifest lists no u_curr");

    const TensorTrain<cd> u = load_ttop_file(checkpoint_dir + "/" + u_curr_file);
    const InteractionSpec spec = config.interaction_spec();
    const TensorTrain<cd> H = build_hamiltonian<cd>(spec);
    if (H.length() != u.length())
      throw std::runtime_error("checkpoint length does not match the configured model");

    out << "checkpoint: " << checkpoint_dir << " (iteration " << iteration << ")\n";
    const TraceCheck tr = check_traceless(u);
    out << "trace            |Tr U| = " << tr.abs_trace
        << "   |Tr U|/||U|| = " << tr.normalized << '\n';
    const CommutationCheck comm = check_commutation(H, u, config.compression_settings());
    out << "commutation      residual = " << comm.residual
        << "   uncertainty = " << comm.uncertainty << '\n';
    for (SymmetryKind kind : all_symmetry_kinds())
      out << "symmetry         " << symmetry_kind_name(kind) << " = "
          << check_symmetry(u, kind) << '\n';
    const AlphaMonitorReport alphas = monitor_alphas(jacobi, config.diagnostics.warn_tol);
    out << "alpha warnings   " << alphas.warnings.size()
        << " (small alphas are necessary, not sufficient, for accuracy)\n";
    for (const auto& w : alphas.warnings)
      out << "  iteration " << w.iteration << ": alpha = " << w.value << '\n';
    return 0;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "diagnose failed: " << e.what() << '\n';
    return 1;
  }
}

int cmd_oracle(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const InteractionSpec spec = config.interaction_spec();
    const DenseOperator H = dense_hamiltonian(spec);
    const double value = dense_trace_fn(H, config.spectral_function());
    out.precision(17);
    out << "dense oracle: Tr f(A) = " << value << "  (N = " << H.matrix.rows() << ")\n";
    return 0;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const numerical_error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ttrace
