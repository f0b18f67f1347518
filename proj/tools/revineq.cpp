#include <iostream>

#include <CLI11.hpp>

#include "revineq/cli.hpp"
#include "revineq/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of reverse integral inequalities on homogeneous groups"};
  std::string config_path;
  std::string command;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  app.add_option("--config", config_path, "Config file (INI sections, JSON values)")->required();
  app.add_option("--command", command, "verify | estimate | sweep | axioms (overrides run.command)")
      ->check(CLI::IsMember({"verify", "estimate", "sweep", "axioms"}));
  app.add_option("--seed", seed, "Seed (overrides run.seed)");
  app.add_option("--out", out_dir, "Output directory (overrides run.out)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : revineq::kExitConfigError;
  }

  revineq::RunConfig config;
  try {
    config = revineq::load_config(config_path);
  } catch (const revineq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return revineq::exit_status_for(e);
  }
  if (!command.empty()) config.command = command;
  if (seed) config.apply_seed(*seed);
  if (!out_dir.empty()) config.out_dir = out_dir;
  return revineq::run(config, std::cout);
}
