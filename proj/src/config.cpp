#include "ttrace/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ttrace/errors.hpp"

namespace ttrace {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw config_error("expected a number, got '" + v + "'", line);
  }
}

long long parse_int(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const long long n = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return n;
  } catch (...) {
    throw config_error("expected an integer, got '" + v + "'", line);
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw config_error("expected true/false, got '" + v + "'", line);
}

ExperimentConfig::TermSpec parse_term(const std::string& v, int line) {
  std::istringstream is(v);
  std::string axis, len, rest;
  is >> axis >> len >> rest;
  std::string extra;
  if (is >> extra) throw config_error("term takes '<axis> <length> <couplings>'", line);
  if (axis.size() != 1 || len.empty() || rest.empty())
    throw config_error("term takes '<axis> <length> <couplings>'", line);
  ExperimentConfig::TermSpec t;
  try {
    t.axis = axis_from_char(axis[0]);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what(), line);
  }
  t.block_length = static_cast<int>(parse_int(len, line));
  for (const std::string& c : split(rest, ','))
    t.couplings.push_back(parse_double(c, line));
  return t;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void apply_key(ExperimentConfig& c, const std::string& section, const std::string& key,
               const std::string& value, int line, bool& saw_term) {
  auto bad_key = [&]() -> config_error {
    return config_error("unknown key '" + key + "' in section [" + section + "]", line);
  };
  if (section.empty()) {
    if (key == "version") {
      c.version = static_cast<int>(parse_int(value, line));
      if (c.version != 1) throw config_error("unsupported config version " + value, line);
      return;
    }
    throw config_error("key '" + key + "' before any section", line);
  }
  if (section == "model") {
    if (key == "length") c.model.length = parse_int(value, line);
    else if (key == "boundary") {
      if (value == "open") c.model.boundary = Boundary::Open;
      else if (value == "periodic") c.model.boundary = Boundary::Periodic;
      else throw config_error("boundary must be open or periodic", line);
    } else if (key == "term") {
      if (!saw_term) c.model.terms.clear();  // overriding replaces the list
      saw_term = true;
      c.model.terms.push_back(parse_term(value, line));
    } else throw bad_key();
  } else if (section == "function") {
    if (key == "name") {
      if (value != "exp_neg_beta" && value != "power" && value != "identity" &&
          value != "tabulated")
        throw config_error("unknown function '" + value + "'", line);
      c.function.name = value;
    } else if (key == "beta") c.function.beta = parse_double(value, line);
    else if (key == "exponent") c.function.exponent = parse_double(value, line);
    else if (key == "table") c.function.table = value;
    else throw bad_key();
  } else if (section == "run") {
    if (key == "mode") {
      try {
        c.run.mode = mode_from_name(value);
      } catch (const std::invalid_argument& e) {
        throw config_error(e.what(), line);
      }
    } else if (key == "max_iterations") c.run.max_iterations = static_cast<int>(parse_int(value, line));
    else if (key == "rel_change_tol") c.run.rel_change_tol = parse_double(value, line);
    else if (key == "breakdown_tol") c.run.breakdown_tol = parse_double(value, line);
    else if (key == "max_bond") c.run.max_bond = parse_int(value, line);
    else if (key == "svd_cutoff") c.run.svd_cutoff = parse_double(value, line);
    else if (key == "max_sweeps") c.run.max_sweeps = static_cast<int>(parse_int(value, line));
    else if (key == "sweep_tol") c.run.sweep_tol = parse_double(value, line);
    else if (key == "hermiticity_tol") c.run.hermiticity_tol = parse_double(value, line);
    else if (key == "seed") c.run.seed = static_cast<std::uint64_t>(parse_int(value, line));
    else throw bad_key();
  } else if (section == "output") {
    if (key == "csv") c.output.csv = value;
    else if (key == "summary") c.output.summary = value;
    else if (key == "checkpoint_dir") c.output.checkpoint_dir = value;
    else if (key == "checkpoint_interval")
      c.output.checkpoint_interval = static_cast<int>(parse_int(value, line));
    else throw bad_key();
  } else if (section == "diagnostics") {
    if (key == "enabled") c.diagnostics.enabled = parse_bool(value, line);
    else if (key == "trace_every") c.diagnostics.trace_every = static_cast<int>(parse_int(value, line));
    else if (key == "alpha_every") c.diagnostics.alpha_every = static_cast<int>(parse_int(value, line));
    else if (key == "commutation_every")
      c.diagnostics.commutation_every = static_cast<int>(parse_int(value, line));
    else if (key == "symmetry_every")
      c.diagnostics.symmetry_every = static_cast<int>(parse_int(value, line));
    else if (key == "warn_tol") c.diagnostics.warn_tol = parse_double(value, line);
    else throw bad_key();
  } else if (section == "bench") {
    if (key == "lengths") {
      c.bench.lengths.clear();
      for (const std::string& v : split(value, ',')) c.bench.lengths.push_back(parse_int(v, line));
    } else if (key == "max_bonds") {
      c.bench.max_bonds.clear();
      for (const std::string& v : split(value, ',')) c.bench.max_bonds.push_back(parse_int(v, line));
    } else if (key == "iterations") c.bench.iterations = static_cast<int>(parse_int(value, line));
    else if (key == "repetitions") c.bench.repetitions = static_cast<int>(parse_int(value, line));
    else if (key == "modes") {
      c.bench.modes.clear();
      for (const std::string& v : split(value, ',')) {
        try {
          c.bench.modes.push_back(mode_from_name(v));
        } catch (const std::invalid_argument& e) {
          throw config_error(e.what(), line);
        }
      }
    } else if (key == "parallel") c.bench.parallel = parse_bool(value, line);
    else throw bad_key();
  } else {
    throw config_error("unknown section [" + section + "]", line);
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& is,
                                         const std::vector<std::string>& overrides) {
  ExperimentConfig c;
  c.model.terms.clear();
  std::string raw;
  std::string section;
  int line_no = 0;
  bool saw_term = false;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw config_error("malformed section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw config_error("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("empty key", line_no);
    apply_key(c, section, key, value, line_no, saw_term);
  }
  saw_term = false;  // a term override replaces the parsed list
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    const auto dot = ov.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      throw config_error("override must look like section.key=value: " + ov);
    apply_key(c, trim(ov.substr(0, dot)), trim(ov.substr(dot + 1, eq - dot - 1)),
              trim(ov.substr(eq + 1)), -1, saw_term);
  }
  if (c.model.terms.empty())
    throw config_error("[model] must declare at least one term");
  return c;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path,
                                              const std::vector<std::string>& overrides) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file " + path);
  return parse(is, overrides);
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text,
                                                const std::vector<std::string>& overrides) {
  std::istringstream is(text);
  return parse(is, overrides);
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream os;
  os << "version = " << version << "\n\n";
  os << "[model]\n";
  os << "length = " << model.length << "\n";
  os << "boundary = " << (model.boundary == Boundary::Open ? "open" : "periodic") << "\n";
  for (const auto& t : model.terms) {
    os << "term = " << axis_char(t.axis) << ' ' << t.block_length << ' ';
    for (std::size_t i = 0; i < t.couplings.size(); ++i) {
      if (i) os << ',';
      os << fmt(t.couplings[i]);
    }
    os << "\n";
  }
  os << "\n[function]\n";
  os << "name = " << function.name << "\n";
  os << "beta = " << fmt(function.beta) << "\n";
  os << "exponent = " << fmt(function.exponent) << "\n";
  if (!function.table.empty()) os << "table = " << function.table << "\n";
  os << "\n[run]\n";
  os << "mode = " << mode_name(run.mode) << "\n";
  os << "max_iterations = " << run.max_iterations << "\n";
  os << "rel_change_tol = " << fmt(run.rel_change_tol) << "\n";
  os << "breakdown_tol = " << fmt(run.breakdown_tol) << "\n";
  os << "max_bond = " << run.max_bond << "\n";
  os << "svd_cutoff = " << fmt(run.svd_cutoff) << "\n";
  os << "max_sweeps = " << run.max_sweeps << "\n";
  os << "sweep_tol = " << fmt(run.sweep_tol) << "\n";
  os << "hermiticity_tol = " << fmt(run.hermiticity_tol) << "\n";
  os << "seed = " << run.seed << "\n";
  os << "\n[output]\n";
  if (!output.csv.empty()) os << "csv = " << output.csv << "\n";
  if (!output.summary.empty()) os << "summary = " << output.summary << "\n";
  if (!output.checkpoint_dir.empty()) os << "checkpoint_dir = " << output.checkpoint_dir << "\n";
  os << "checkpoint_interval = " << output.checkpoint_interval << "\n";
  os << "\n[diagnostics]\n";
  os << "enabled = " << (diagnostics.enabled ? "true" : "false") << "\n";
  os << "trace_every = " << diagnostics.trace_every << "\n";
  os << "alpha_every = " << diagnostics.alpha_every << "\n";
  os << "commutation_every = " << diagnostics.commutation_every << "\n";
  os << "symmetry_every = " << diagnostics.symmetry_every << "\n";
  os << "warn_tol = " << fmt(diagnostics.warn_tol) << "\n";
  os << "\n[bench]\n";
  os << "lengths = ";
  for (std::size_t i = 0; i < bench.lengths.size(); ++i)
    os << (i ? "," : "") << bench.lengths[i];
  os << "\nmax_bonds = ";
  for (std::size_t i = 0; i < bench.max_bonds.size(); ++i)
    os << (i ? "," : "") << bench.max_bonds[i];
  os << "\niterations = " << bench.iterations << "\n";
  os << "repetitions = " << bench.repetitions << "\n";
  os << "modes = ";
  for (std::size_t i = 0; i < bench.modes.size(); ++i)
    os << (i ? "," : "") << mode_name(bench.modes[i]);
  os << "\nparallel = " << (bench.parallel ? "true" : "false") << "\n";
  return os.str();
}

InteractionSpec ExperimentConfig::interaction_spec() const {
  InteractionSpec spec;
  spec.length = model.length;
  spec.boundary = model.boundary;
  for (const auto& t : model.terms) {
    InteractionTerm term;
    term.axis = t.axis;
    term.block_length = t.block_length;
    if (t.block_length < 1 || t.block_length > model.length)
      throw config_error("term block length " + std::to_string(t.block_length) +
                         " does not fit chain of length " + std::to_string(model.length));
    const Index need = spec.open_offsets(term) + spec.wrap_count(term);
    if (t.couplings.size() == 1)
      term.couplings.assign(static_cast<std::size_t>(need), t.couplings.front());
    else if (static_cast<Index>(t.couplings.size()) == need)
      term.couplings = t.couplings;
    else
      throw config_error("term needs 1 or " + std::to_string(need) + " couplings, got " +
                         std::to_string(t.couplings.size()));
    spec.terms.push_back(std::move(term));
  }
  spec.validate();
  return spec;
}

SpectralFunction ExperimentConfig::spectral_function() const {
  if (function.name == "identity") return SpectralFunction::identity();
  if (function.name == "exp_neg_beta") return SpectralFunction::exp_neg_beta(function.beta);
  if (function.name == "power") return SpectralFunction::power(function.exponent);
  if (function.name == "tabulated") {
    std::ifstream is(function.table);
    if (!is) throw config_error("cannot open function table " + function.table);
    std::vector<double> x, fx;
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
      ++n;
      line = trim(line);
      if (line.empty() || line.front() == '#') continue;
      const auto parts = split(line, ',');
      if (parts.size() != 2) throw config_error("table rows are 'x,f'", n);
      x.push_back(parse_double(parts[0], n));
      fx.push_back(parse_double(parts[1], n));
    }
    return SpectralFunction::tabulated(std::move(x), std::move(fx));
  }
  throw config_error("unknown function '" + function.name + "'");
}

CompressionSettings ExperimentConfig::compression_settings() const {
  CompressionSettings s;
  s.max_bond = run.max_bond;
  s.svd_cutoff = run.svd_cutoff;
  s.max_sweeps = run.max_sweeps;
  s.sweep_tol = run.sweep_tol;
  s.validate();
  return s;
}

StoppingCriteria ExperimentConfig::stopping_criteria() const {
  StoppingCriteria s;
  s.max_iterations = run.max_iterations;
  s.rel_change_tol = run.rel_change_tol;
  s.breakdown_tol = run.breakdown_tol;
  return s;
}

MonitorSettings ExperimentConfig::monitor_settings() const {
  MonitorSettings m;
  m.enabled = diagnostics.enabled;
  m.trace_every = diagnostics.trace_every;
  m.alpha_every = diagnostics.alpha_every;
  m.commutation_every = diagnostics.commutation_every;
  m.symmetry_every = diagnostics.symmetry_every;
  m.warn_tol = diagnostics.warn_tol;
  return m;
}

}  // namespace ttrace
