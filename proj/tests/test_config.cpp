#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "ttrace/config.hpp"
#include "ttrace/errors.hpp"

using namespace ttrace;

namespace {
const char* kExample = R"(# transverse-field Ising example
version = 1

[model]
length = 6
boundary = open
term = x 2 1.0
term = z 1 1.0

[function]
name = exp_neg_beta
beta = 1.0

[run]
mode = auto
max_iterations = 40
max_bond = 16

[output]
csv = out.csv
)";
}  // namespace

TEST_CASE("parse and defaults") {
  const auto c = ExperimentConfig::parse_string(kExample);
  CHECK(c.model.length == 6);
  CHECK(c.model.boundary == Boundary::Open);
  REQUIRE(c.model.terms.size() == 2);
  CHECK(c.model.terms[0].axis == Axis::X);
  CHECK(c.model.terms[0].block_length == 2);
  CHECK(c.model.terms[0].couplings == std::vector<double>{1.0});
  CHECK(c.run.mode == LanczosMode::Auto);
  CHECK(c.run.max_iterations == 40);
  CHECK(c.run.max_bond == 16);
  CHECK(c.run.rel_change_tol == 1e-6);  // default
  CHECK(c.output.csv == "out.csv");
  CHECK(c.diagnostics.enabled);
  CHECK(c.bench.repetitions == 5);
}

TEST_CASE("serialize round trip is idempotent") {
  const auto c = ExperimentConfig::parse_string(kExample);
  const std::string once = c.serialize();
  const auto c2 = ExperimentConfig::parse_string(once);
  const std::string twice = c2.serialize();
  CHECK(once == twice);
}

TEST_CASE("schema violations are rejected with line numbers") {
  CHECK_THROWS_AS(ExperimentConfig::parse_string("version = 2\n[model]\nterm = x 1 1\n"),
                  config_error);
  CHECK_THROWS_AS(
      ExperimentConfig::parse_string("[model]\nlength = 4\nterm = x 1 1\nwidth = 3\n"),
      config_error);
  CHECK_THROWS_AS(ExperimentConfig::parse_string("[mdoel]\nlength = 4\n"), config_error);
  CHECK_THROWS_AS(ExperimentConfig::parse_string("[model]\nterm = w 1 1\n"), config_error);
  CHECK_THROWS_AS(ExperimentConfig::parse_string("[model]\nterm = x 1\n"), config_error);
  CHECK_THROWS_AS(ExperimentConfig::parse_string("[model]\nlength == 4\n"), config_error);
  CHECK_THROWS_AS(ExperimentConfig::parse_string("[model]\nlength = 4\n"), config_error);
  try {
    ExperimentConfig::parse_string("[model]\nlength = 4\nterm = x 1 1\nbogus = 1\n");
  } catch (const config_error& e) {
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
}

TEST_CASE("overrides win over file values") {
  const auto c = ExperimentConfig::parse_string(
      kExample, {"run.max_bond=64", "model.length=8", "run.mode=vanilla"});
  CHECK(c.run.max_bond == 64);
  CHECK(c.model.length == 8);
  CHECK(c.run.mode == LanczosMode::Vanilla);

  // last override wins
  const auto c2 = ExperimentConfig::parse_string(kExample, {"run.max_bond=64", "run.max_bond=8"});
  CHECK(c2.run.max_bond == 8);

  // overriding terms replaces the whole list
  const auto c3 = ExperimentConfig::parse_string(kExample, {"model.term=z 1 2.5"});
  REQUIRE(c3.model.terms.size() == 1);
  CHECK(c3.model.terms[0].axis == Axis::Z);

  CHECK_THROWS_AS(ExperimentConfig::parse_string(kExample, {"nonsense"}), config_error);
  CHECK_THROWS_AS(ExperimentConfig::parse_string(kExample, {"run.bogus=1"}), config_error);
}

TEST_CASE("interaction spec materialization") {
  auto c = ExperimentConfig::parse_string(kExample);
  const InteractionSpec spec = c.interaction_spec();
  REQUIRE(spec.terms.size() == 2);
  CHECK(spec.terms[0].couplings.size() == 5);  // L - i + 1
  CHECK(spec.terms[1].couplings.size() == 6);
  CHECK(spec.uniform());

  // explicit coupling lists must match exactly
  auto explicit_ok = ExperimentConfig::parse_string(kExample, {"model.term=z 1 1,2,3,4,5,6"});
  CHECK(explicit_ok.interaction_spec().terms[0].couplings[3] == 4.0);
  auto wrong_count = ExperimentConfig::parse_string(kExample, {"model.term=z 1 1,2,3"});
  CHECK_THROWS_AS(wrong_count.interaction_spec(), config_error);

  // block longer than the chain is a schema-level failure
  auto too_long = ExperimentConfig::parse_string(kExample, {"model.term=x 9 1.0"});
  CHECK_THROWS_AS(too_long.interaction_spec(), config_error);
}

TEST_CASE("spectral function selection") {
  auto c = ExperimentConfig::parse_string(kExample);
  CHECK(c.spectral_function()(1.0) == doctest::Approx(std::exp(-1.0)));

  c.function.name = "power";
  c.function.exponent = 3.0;
  CHECK(c.spectral_function()(2.0) == doctest::Approx(8.0));

  c.function.name = "identity";
  CHECK(c.spectral_function()(0.3) == doctest::Approx(0.3));

  const std::string table_path = "test_config_table.csv";
  {
    std::ofstream f(table_path);
    f << "# x,f\n-1.0,2.0\n0.0,1.0\n1.0,4.0\n";
  }
  c.function.name = "tabulated";
  c.function.table = table_path;
  const auto f = c.spectral_function();
  CHECK(f(0.0) == doctest::Approx(1.0));
  CHECK(f(0.5) == doctest::Approx(2.5));   // linear interpolation
  CHECK(f(-5.0) == doctest::Approx(2.0));  // clamped
  std::remove(table_path.c_str());
}
