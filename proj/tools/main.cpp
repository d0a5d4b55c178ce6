#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "villain/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Villain rotor model: Green's functions, Monte Carlo, exact oracles and bound checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  const char* commands[][2] = {
      {"greens", "Compute the lattice Green's table and its asymptotic slope"},
      {"sample", "Run a Markov chain and estimate correlators"},
      {"duality-check", "Compare angle and current partition functions on a tiny lattice"},
      {"bounds", "Check correlation bounds against exact values or a sample summary"},
  };
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd[0], cmd[1]);
    sub->add_option("--config", config_path, "Config file or prior summary.json")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : villain::kExitInvalid;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return villain::run_command(command, config_path, out_dir, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return villain::kExitCheckFailed;
  }
}
