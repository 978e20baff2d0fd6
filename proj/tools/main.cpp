// Command-line front end: every subcommand loads a scenario config, applies
// the flag overrides and dispatches to the matching pipeline.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "nagumo/scenario.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string emit_orbits;
  double tol_rel = -1.0;
  double tol_abs = -1.0;
  double dt_out = -1.0;
  int seeds = -1;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "scenario config file")
      ->required();
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--tol-rel", flags.tol_rel, "relative integrator tolerance");
  cmd->add_option("--tol-abs", flags.tol_abs, "absolute integrator tolerance");
  cmd->add_option("--dt-out", flags.dt_out, "CSV sampling step");
  cmd->add_option("--seeds", flags.seeds, "angular seed count (radial = half)");
  cmd->add_flag("--quiet", flags.quiet, "suppress the summary");
}

int run(nagumo::Task task, const CommonFlags& flags,
        const std::vector<double>& nbar_grid, const std::string& emit_orbits) {
  using namespace nagumo;
  Scenario sc;
  try {
    const Config cfg = Config::parse_file(flags.config_path);
    sc = Scenario::from_config(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  sc.task = task;
  if (!flags.out_dir.empty()) sc.out_dir = flags.out_dir;
  if (flags.tol_rel > 0) sc.tol.rel_tol = flags.tol_rel;
  if (flags.tol_abs > 0) sc.tol.abs_tol = flags.tol_abs;
  if (flags.dt_out > 0) sc.dt_out = flags.dt_out;
  if (flags.seeds > 0) {
    sc.finder.seeds_angular = flags.seeds;
    sc.finder.seeds_radial = std::max(2, flags.seeds / 2);
  }
  if (flags.quiet) sc.quiet = true;
  if (!nbar_grid.empty()) sc.nbar_grid = nbar_grid;
  if (!emit_orbits.empty()) sc.emit_orbits_dir = emit_orbits;
  try {
    const ScenarioResult res = run_scenario(sc);
    if (!sc.quiet) std::printf("%s\n", res.summary.c_str());
    return res.exit_code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Periodic and subharmonic solutions of the Nagumo-type fiber equation: "
      "phase portraits, time maps, rotation numbers, twist certificates and "
      "fixed-point search of iterated period maps"};
  app.require_subcommand(1);

  struct Sub {
    nagumo::Task task;
    CLI::App* cmd;
    CommonFlags flags;
    std::vector<double> nbar_grid;
    std::string emit_orbits;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  const auto add = [&](nagumo::Task task, const char* name, const char* help) {
    auto sub = std::make_unique<Sub>();
    sub->task = task;
    sub->cmd = app.add_subcommand(name, help);
    add_common(sub->cmd, sub->flags);
    if (task == nagumo::Task::TimeMap)
      sub->cmd->add_option("--nbar-grid", sub->nbar_grid,
                           "constant-part values for the period table")
          ->delimiter(',');
    if (task == nagumo::Task::FindOrbits)
      sub->cmd->add_option("--emit-orbits", sub->emit_orbits,
                           "directory for per-orbit trajectory CSVs");
    subs.push_back(std::move(sub));
  };

  add(nagumo::Task::Portrait, "portrait",
      "integrate orbit segments from points on the x-axis");
  add(nagumo::Task::TimeMap, "timemap",
      "period table of the comparison system over a constant-part grid");
  add(nagumo::Task::Rotation, "rotation",
      "rotation numbers of the listed start points");
  add(nagumo::Task::OuterRadius, "outer-radius",
      "radius where all sampled solutions make less than one turn");
  add(nagumo::Task::FindOrbits, "find-orbits",
      "twist certificate and fixed points of the iterated period map");
  add(nagumo::Task::Subharmonics, "subharmonics",
      "orbits with rotation number co-prime with m (minimal period m*beta)");
  add(nagumo::Task::Sweep, "sweep",
      "multiplicity table over a (nbar, alpha, m) grid of two-step weights");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // any usage problem is a config error
  }

  for (const auto& sub : subs)
    if (sub->cmd->parsed())
      return run(sub->task, sub->flags, sub->nbar_grid, sub->emit_orbits);
  return 2;
}
