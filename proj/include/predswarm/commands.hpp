#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "predswarm/io.hpp"

namespace predswarm::cli {

namespace fs = std::filesystem;

struct Common {
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  bool quiet = false;
};

struct SchoolOptions {
  Common common;
  std::string pattern = "custom";
  fs::path out = "school.csv";
};

struct RunOptions {
  Common common;
  std::string pattern = "custom";
  long record_every = 10;
  fs::path out_dir = "run";
};

struct SweepOptions {
  Common common;
  std::vector<Strategy> strategies{Strategy::CenterAttack};
  std::vector<int> n_list{1, 5, 10, 20, 40, 60, 80, 100, 120, 160, 200};
  std::size_t trials = 200;
  fs::path out = "sweep.csv";
};

struct MetricsOptions {
  Common common;
  fs::path trajectory;
  fs::path out = "metrics.csv";
  std::optional<double> link_dist;
};

/// Each command writes its outputs plus a manifest and returns the manifest.
/// Divergence surfaces as DivergenceError; bad input as ValidationError or
/// ParseError.
RunManifest school_command(const SchoolOptions& opts);
RunManifest run_command(const RunOptions& opts);
/// `failures` receives the number of diverged trials.
RunManifest sweep_command(const SweepOptions& opts, std::size_t* failures = nullptr);
RunManifest metrics_command(const MetricsOptions& opts);

/// Re-executes the command recorded in `manifest`, writing into `out_dir`.
RunManifest replay_command(const fs::path& manifest, const fs::path& out_dir, bool quiet = true);

/// Parameters for a command: `preset` ("I".."IV", "sweep-default", or
/// "custom" for the built-in defaults) overlaid with the config file.
ConfigFile resolve_params(const Common& common, const std::string& preset);

std::vector<int> parse_int_list(const std::string& text);
std::vector<Strategy> parse_strategy_list(const std::string& text);

}  // namespace predswarm::cli
