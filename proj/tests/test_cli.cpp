#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "ttrace/config.hpp"
#include "ttrace/runner.hpp"

using namespace ttrace;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tfim_config(Index L, const std::string& mode = "auto") {
  std::ostringstream os;
  os << "version = 1\n[model]\nlength = " << L
     << "\nboundary = open\nterm = x 2 1.0\nterm = z 1 1.0\n"
     << "[function]\nname = exp_neg_beta\nbeta = 1.0\n"
     << "[run]\nmode = " << mode
     << "\nmax_iterations = 60\nrel_change_tol = 0\nmax_bond = 1000000\nsvd_cutoff = 1e-14\n";
  return ExperimentConfig::parse_string(os.str());
}

// zero the wall-time column for determinism comparisons
std::string strip_wall(const std::string& csv) {
  std::istringstream is(csv);
  std::ostringstream os;
  std::string line;
  while (std::getline(is, line)) {
    const auto pos = line.rfind(',');
    os << line.substr(0, pos) << "\n";
  }
  return os.str();
}

}  // namespace

TEST_CASE("cmd_run on the ising chain resolves auto to chiral fast") {
  auto config = tfim_config(2);
  std::ostringstream out, err;
  CHECK(cmd_run(config, out, err) == 0);
  const std::string summary = out.str();
  CHECK(summary.find("mode: chiral_fast") != std::string::npos);
  CHECK(summary.find("witness: XY") != std::string::npos);

  const QuadratureReport report = run_experiment(config);
  const double want = 2 * std::cosh(std::sqrt(5.0)) + 2 * std::cosh(1.0);
  CHECK(test::rel_err(report.estimate, want) <= 1e-8);
  CHECK(report.witness == "XY");
}

TEST_CASE("vanilla agrees with the auto-selected mode") {
  const QuadratureReport fast = run_experiment(tfim_config(4));
  const QuadratureReport van = run_experiment(tfim_config(4, "vanilla"));
  CHECK(fast.mode == LanczosMode::ChiralFast);
  CHECK(van.mode == LanczosMode::Vanilla);
  CHECK(test::rel_err(fast.estimate, van.estimate) <= 1e-8);
}

TEST_CASE("config errors exit with code 1") {
  auto config = tfim_config(2);
  config.model.terms[0].block_length = 5;  // longer than the chain
  std::ostringstream out, err;
  CHECK(cmd_run(config, out, err) == 1);
  CHECK(err.str().find("config error") != std::string::npos);
}

TEST_CASE("csv output is deterministic except for wall times") {
  auto config = tfim_config(3);
  config.output.csv = "test_cli_run.csv";
  std::ostringstream out, err;
  REQUIRE(cmd_run(config, out, err) == 0);
  std::stringstream first;
  first << std::ifstream(config.output.csv).rdbuf();
  REQUIRE(cmd_run(config, out, err) == 0);
  std::stringstream second;
  second << std::ifstream(config.output.csv).rdbuf();
  CHECK(first.str() != "");
  CHECK(strip_wall(first.str()) == strip_wall(second.str()));
  fs::remove(config.output.csv);
}

TEST_CASE("bench emits one row per grid point") {
  auto config = tfim_config(4, "vanilla");
  config.bench.lengths = {4, 6};
  config.bench.max_bonds = {8};
  config.bench.iterations = 3;
  config.bench.repetitions = 2;
  config.bench.modes = {LanczosMode::Vanilla, LanczosMode::ChiralFast};
  std::ostringstream out, err;
  REQUIRE(cmd_bench(config, out, err) == 0);
  std::istringstream is(out.str());
  std::string line;
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 1 + 2 * 1 * 2 * 2);  // header + grid

  // explicit per-offset couplings cannot be rescaled across lengths
  auto bad = tfim_config(4, "vanilla");
  bad.model.terms[0].couplings = {1.0, 0.5, 0.25};
  std::ostringstream out2, err2;
  CHECK(cmd_bench(bad, out2, err2) == 1);
}

TEST_CASE("checkpointing and diagnose") {
  const std::string dir = "test_cli_ckpt";
  fs::remove_all(dir);
  auto config = tfim_config(4);
  config.output.checkpoint_dir = dir;
  config.output.checkpoint_interval = 2;
  std::ostringstream out, err;
  REQUIRE(cmd_run(config, out, err) == 0);
  REQUIRE(fs::exists(dir + "/manifest.txt"));
  REQUIRE(fs::exists(dir + "/u_curr.ttop"));

  std::ostringstream dout, derr;
  CHECK(cmd_diagnose(config, dir, dout, derr) == 0);
  const std::string table = dout.str();
  CHECK(table.find("trace") != std::string::npos);
  CHECK(table.find("commutation") != std::string::npos);
  CHECK(table.find("hermitian") != std::string::npos);

  // corrupt the container magic: diagnose must fail with exit 1
  {
    std::fstream f(dir + "/u_curr.ttop", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
  }
  std::ostringstream dout2, derr2;
  CHECK(cmd_diagnose(config, dir, dout2, derr2) == 1);
  CHECK(derr2.str().find("bad magic") != std::string::npos);

  std::ostringstream dout3, derr3;
  CHECK(cmd_diagnose(config, "no_such_dir", dout3, derr3) == 1);
  fs::remove_all(dir);
}

TEST_CASE("oracle command prints the dense value") {
  auto config = tfim_config(2);
  std::ostringstream out, err;
  REQUIRE(cmd_oracle(config, out, err) == 0);
  CHECK(out.str().find("12.549") != std::string::npos);

  auto big = tfim_config(2);
  big.model.length = 13;  // beyond the dense cap
  std::ostringstream out2, err2;
  CHECK(cmd_oracle(big, out2, err2) == 1);
}
