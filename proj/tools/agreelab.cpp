#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "agreelab/commands.hpp"

int main(int argc, char** argv) {
  namespace cli = agreelab::cli;
  CLI::App app{"agreelab: consensus and two-degree-of-freedom agreement networks"};
  app.require_subcommand(1);

  std::string graph_file;
  auto* spectrum = app.add_subcommand("spectrum", "normalized adjacency spectrum of a graph file");
  spectrum->add_option("graph", graph_file, "graph file")->required();

  std::string config;
  auto* check = app.add_subcommand("check", "agreement certificate and cancellation checks");
  check->add_option("config", config, "experiment config")->required();

  std::string out_dir;
  std::uint64_t seed = 0;
  int realizations = 0;
  auto* simulate = app.add_subcommand("simulate", "simulate a config, write CSV and metrics");
  simulate->add_option("config", config, "experiment config")->required();
  auto* out_opt = simulate->add_option("--out", out_dir, "output directory");
  auto* seed_opt = simulate->add_option("--seed", seed, "master seed");
  auto* real_opt = simulate->add_option("--realizations", realizations, "noise realizations");

  auto* design = app.add_subcommand("design", "search the network filter family");
  design->add_option("config", config, "experiment config with a design section")->required();

  std::string scenario;
  auto* reproduce = app.add_subcommand("reproduce", "run a built-in scenario for both protocols");
  reproduce->add_option("scenario", scenario, "nominal, noise, dist or dist-pi")->required();
  auto* rep_out = reproduce->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  if (*spectrum) return cli::cmd_spectrum(graph_file, std::cout, std::cerr);
  if (*check) return cli::cmd_check(config, std::cout, std::cerr);
  if (*design) return cli::cmd_design(config, std::cout, std::cerr);
  if (*simulate) {
    cli::SimulateOverrides ov;
    if (*out_opt) ov.out_dir = out_dir;
    if (*seed_opt) ov.seed = seed;
    if (*real_opt) ov.realizations = realizations;
    return cli::cmd_simulate(config, ov, std::cout, std::cerr);
  }
  std::optional<std::filesystem::path> dir;
  if (*rep_out) dir = out_dir;
  return cli::cmd_reproduce(scenario, dir, std::cout, std::cerr);
}
