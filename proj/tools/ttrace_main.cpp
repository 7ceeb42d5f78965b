#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "ttrace/config.hpp"
#include "ttrace/errors.hpp"
#include "ttrace/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ttrace: tensor-train estimation of Tr f(A) by global Lanczos quadrature"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string checkpoint_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "experiment config file")->required();
    sub->add_option("--set", overrides,
                    "override a config key as section.key=value (repeatable, last wins)");
  };

  CLI::App* run = app.add_subcommand("run", "build the Hamiltonian and run the estimator");
  add_common(run);
  CLI::App* bench =
      app.add_subcommand("bench", "per-iteration timing grid over lengths/bonds/modes");
  add_common(bench);
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "audit a basis checkpoint with the inheritance checks");
  add_common(diagnose);
  diagnose->add_option("--checkpoint", checkpoint_dir, "checkpoint directory")->required();
  CLI::App* oracle =
      app.add_subcommand("oracle", "dense reference value of Tr f(A) (small systems)");
  add_common(oracle);

  CLI11_PARSE(app, argc, argv);

  ttrace::ExperimentConfig config;
  try {
    config = ttrace::ExperimentConfig::parse_file(config_path, overrides);
  } catch (const ttrace::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  if (run->parsed()) return ttrace::cmd_run(config, std::cout, std::cerr);
  if (bench->parsed()) return ttrace::cmd_bench(config, std::cout, std::cerr);
  if (diagnose->parsed())
    return ttrace::cmd_diagnose(config, checkpoint_dir, std::cout, std::cerr);
  if (oracle->parsed()) return ttrace::cmd_oracle(config, std::cout, std::cerr);
  return 1;
}
