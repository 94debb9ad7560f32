#include "tripod/cli/config.hpp"
#include "tripod/cli/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

using namespace tripod::cli;

int main(int argc, char** argv) {
  CLI::App app{"Slow-light propagation in a tripod medium"};
  app.require_subcommand(1);
  app.footer(output_help());

  std::string target;
  Overrides ov;
  std::string solver, out_dir, grid;
  double tol = 0.0;
  bool print_config = false;

  auto* run = app.add_subcommand("run", "Run a preset or a JSON config file");
  std::string presets;
  for (const auto& p : preset_names()) presets += (presets.empty() ? "" : ", ") + p;
  run->add_option("target", target, "Preset (" + presets + ") or path to a JSON config")->required();
  run->add_option("--solver", solver, "analytic, goursat or mb")->check(CLI::IsMember({"analytic", "goursat", "mb"}));
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--long-tail", ov.long_tail, "Extend the tau range for the long-time decay");
  run->add_option("--grid", grid, "Goursat grid NxM (N tau intervals, M zeta intervals)");
  run->add_option("--tol", tol, "Quadrature relative tolerance");
  run->add_flag("--print-config", print_config, "Print the effective config and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ExperimentConfig cfg;
  try {
    cfg = load_config(target);
    if (!solver.empty()) ov.solver = solver;
    if (!out_dir.empty()) ov.out_dir = out_dir;
    if (!grid.empty()) ov.grid = grid;
    if (run->count("--tol")) ov.tol = tol;
    apply_overrides(cfg, ov);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  if (print_config) {
    std::cout << to_json(cfg).dump(2) << "\n";
    return 0;
  }

  try {
    const RunResult res = run_experiment(cfg);
    write_outputs(cfg.out_dir, res);
    std::printf("%s: wrote %zu file(s) to %s\n", cfg.name.c_str(), res.files.size() + 1, cfg.out_dir.c_str());
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  }
  return 0;
}
