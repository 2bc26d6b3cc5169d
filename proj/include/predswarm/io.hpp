#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "predswarm/core.hpp"
#include "predswarm/montecarlo.hpp"
#include "predswarm/survival.hpp"

namespace predswarm {

inline constexpr std::string_view kVersion = "0.3.0";

/// Parse failure in a config or CSV file; the message carries path and line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigFile {
  SimParams params;
  /// "I".."IV", "sweep-default", or empty when no preset was named.
  std::string preset;
};

/// Parses flat `key = value` text. A `pattern = I..IV` or
/// `preset = sweep-default` line replaces `base` with that preset; explicit
/// keys are applied afterwards regardless of their position in the file, and
/// the result is validated.
ConfigFile parse_config(std::string_view text, const SimParams& base = {},
                        std::string_view origin = "<config>");
ConfigFile read_config(const std::filesystem::path& path, const SimParams& base = {});
SimParams load_config(const std::filesystem::path& path, const SimParams& base = {});

/// Every key of `params`, one per line, in a form parse_config reads back to
/// identical values.
std::string to_config_text(const SimParams& params);

/// Names accepted as config keys.
std::vector<std::string> config_keys();

/// Shortest-round-trip and fixed 17-digit renderings used by the writers.
std::string format_real(double x);

void write_school(const SwarmState& state, const std::filesystem::path& path);
SwarmState read_school(const std::filesystem::path& path);

/// Rows (step, agent_id, kind, alive, x1..xd, v1..vd) for each kept frame:
/// every prey row, eaten ones with alive = 0 and frozen values, then the
/// predator.
void write_trajectory(const TrialRecord& rec, const std::filesystem::path& path);
std::vector<Frame> read_trajectory(const std::filesystem::path& path);

/// Rows (step, n_survived) for step = 0..t_max.
void write_survival(const TrialRecord& rec, const std::filesystem::path& path);

/// Rows (n, strategy, trials, p_eaten_mean, p_eaten_std, p_eaten_q25,
/// p_eaten_q50, p_eaten_q75, t_alive_mean, t_alive_std, n_eaten_mean).
void write_sweep(const SweepTable& table, const std::filesystem::path& path);

/// Per-frame school metrics computed from trajectory frames.
struct MetricsRow {
  long step = 0;
  double diameter = 0.0;
  double velocity_std = 0.0;
  int n_groups = 0;
  int n_survived = 0;
  double p_eaten = 0.0;
  double t_bar_alive = 0.0;
};

/// Metrics for every frame. Eaten steps are resolved to the first frame in
/// which a prey shows alive = 0; the living-time column treats the frame's
/// step as the horizon.
std::vector<MetricsRow> trajectory_metrics(const std::vector<Frame>& frames, double link_dist);
void write_metrics(const std::vector<MetricsRow>& rows, const std::filesystem::path& path);

struct RunManifest {
  SimParams params;
  std::uint64_t seed = 0;
  std::string subcommand;
  std::string preset;
  std::string version{kVersion};
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
  /// Remaining command-line settings (record_every, n_list, ...).
  std::map<std::string, std::string> arguments;
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace predswarm
