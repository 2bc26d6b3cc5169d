// predswarm: command-line front end for the predator-prey schooling engine.
//
//   predswarm school  --config FILE --seed S --out school.csv
//   predswarm run     --config FILE --pattern IV --seed S --record-every 10 --out-dir run/
//   predswarm sweep   --strategy center,nearest --n-list 1,20,120 --trials 200 --jobs 8 --out sweep.csv
//   predswarm metrics --trajectory run/trajectory.csv --out metrics.csv
//   predswarm replay  --manifest run/manifest.json --out-dir again/
//
// Exit status: 0 success, 1 invalid input, 2 numerical divergence.

#include <CLI11.hpp>
#include <fmt/format.h>

#include "predswarm/commands.hpp"

namespace {

using namespace predswarm;
namespace pc = predswarm::cli;

constexpr int kExitInvalid = 1;
constexpr int kExitDiverged = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic predator-prey schooling simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  pc::Common common;
  std::string config;
  std::uint64_t seed = 0;
  std::string out_dir;
  app.add_option("--config", config, "Flat key = value parameter file");
  auto* seed_opt = app.add_option("--seed", seed, "64-bit seed (drawn from entropy when absent)");
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--jobs", common.jobs, "Concurrent trials")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", common.quiet, "Suppress progress messages");

  pc::SchoolOptions school;
  auto* school_cmd = app.add_subcommand("school", "Settle a predator-free school and write it as CSV");
  school_cmd->add_option("--pattern", school.pattern, "I, II, III, IV or custom");
  school_cmd->add_option("--out", school.out, "Output CSV (id, x.., v..)");

  pc::RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run one predation trial and record its trajectory");
  run_cmd->add_option("--pattern", run.pattern, "I, II, III, IV or custom");
  run_cmd->add_option("--record-every", run.record_every, "Steps between recorded frames")
      ->check(CLI::PositiveNumber);

  pc::SweepOptions sweep;
  std::string strategies = "center";
  std::string n_list;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over school sizes");
  sweep_cmd->add_option("--strategy", strategies, "center, nearest or a comma list of both");
  sweep_cmd->add_option("--n-list", n_list, "Comma-separated school sizes");
  sweep_cmd->add_option("--trials", sweep.trials, "Trials per (N, strategy)")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sweep.out, "Output CSV");

  pc::MetricsOptions metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "School metrics for every frame of a trajectory");
  metrics_cmd->add_option("--trajectory", metrics.trajectory, "trajectory.csv from `run`")->required();
  metrics_cmd->add_option("--out", metrics.out, "Output CSV");
  metrics_cmd->add_option("--link-dist", metrics.link_dist, "Subgroup linking distance (default 3 r)");

  std::string manifest;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_cmd->add_option("--manifest", manifest, "manifest.json written by a previous command")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  if (!config.empty()) common.config = config;
  if (*seed_opt) common.seed = seed;

  try {
    if (*school_cmd) {
      school.common = common;
      if (!out_dir.empty()) school.out = pc::fs::path(out_dir) / school.out;
      pc::school_command(school);
    } else if (*run_cmd) {
      run.common = common;
      if (!out_dir.empty()) run.out_dir = out_dir;
      pc::run_command(run);
    } else if (*sweep_cmd) {
      sweep.common = common;
      sweep.strategies = pc::parse_strategy_list(strategies);
      if (!n_list.empty()) sweep.n_list = pc::parse_int_list(n_list);
      if (!out_dir.empty()) sweep.out = pc::fs::path(out_dir) / sweep.out;
      std::size_t failures = 0;
      pc::sweep_command(sweep, &failures);
      if (failures > 0) return kExitDiverged;
    } else if (*metrics_cmd) {
      metrics.common = common;
      if (!out_dir.empty()) metrics.out = pc::fs::path(out_dir) / metrics.out;
      pc::metrics_command(metrics);
    } else if (*replay_cmd) {
      pc::replay_command(manifest, out_dir.empty() ? "replay" : out_dir, common.quiet);
    }
  } catch (const DivergenceError& e) {
    fmt::print(stderr, "predswarm: {}\n", e.what());
    return kExitDiverged;
  } catch (const std::exception& e) {
    fmt::print(stderr, "predswarm: error: {}\n", e.what());
    return kExitInvalid;
  }
  return 0;
}
