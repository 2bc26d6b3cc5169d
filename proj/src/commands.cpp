#include "predswarm/commands.hpp"

#include <chrono>
#include <fmt/format.h>
#include <fstream>

#include "predswarm/montecarlo.hpp"
#include "predswarm/school.hpp"

namespace predswarm::cli {

namespace {

using Clock = std::chrono::steady_clock;

void note(bool quiet, const std::string& message) {
  if (!quiet) fmt::print(stderr, "predswarm: {}\n", message);
}

std::uint64_t pick_seed(const Common& common) {
  if (common.seed) return *common.seed;
  const std::uint64_t seed = entropy_seed();
  // An unseeded run must still be reproducible from its log.
  fmt::print(stderr, "predswarm: no --seed given, using seed {}\n", seed);
  return seed;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path sidecar_manifest(const fs::path& out) {
  fs::path p = out;
  p += ".manifest.json";
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << text;
  if (!out) throw std::runtime_error(fmt::format("{}: write failed", path.string()));
}

RunManifest make_manifest(const ConfigFile& cfg, std::uint64_t seed, std::string subcommand) {
  RunManifest m;
  m.params = cfg.params;
  m.preset = cfg.preset;
  m.seed = seed;
  m.subcommand = std::move(subcommand);
  return m;
}

RunManifest do_school(const ConfigFile& cfg, std::uint64_t seed, const fs::path& out, bool quiet) {
  const auto start = Clock::now();
  NoiseSource src(seed);
  const SwarmState school = generate_school(cfg.params, src);
  write_school(school, out);
  note(quiet, fmt::format("settled {} prey, diameter {:.4g}", school.size(), school_diameter(school)));

  RunManifest m = make_manifest(cfg, seed, "school");
  m.arguments["out"] = out.filename().string();
  m.outputs = {out.string()};
  m.wall_seconds = seconds_since(start);
  write_manifest(m, sidecar_manifest(out));
  return m;
}

RunManifest do_run(const ConfigFile& cfg, std::uint64_t seed, long record_every, const fs::path& out_dir,
                   bool quiet) {
  if (record_every < 1) throw ValidationError("--record-every must be at least 1");
  const auto start = Clock::now();
  const TrialRecord rec = run_trial(cfg.params, seed, {record_every, true});

  fs::create_directories(out_dir);
  const fs::path traj = out_dir / "trajectory.csv";
  const fs::path surv = out_dir / "survival.csv";
  const fs::path conf = out_dir / "config.cfg";
  write_trajectory(rec, traj);
  write_survival(rec, surv);
  write_text(conf, to_config_text(cfg.params));
  note(quiet, fmt::format("{} of {} prey eaten in {} steps; mean living time {:.6g} steps", rec.n_eaten(),
                          rec.n_initial, rec.steps_run, average_living_time(rec)));

  RunManifest m = make_manifest(cfg, seed, "run");
  m.arguments["record_every"] = std::to_string(record_every);
  m.outputs = {traj.string(), surv.string(), conf.string()};
  m.wall_seconds = seconds_since(start);
  write_manifest(m, out_dir / "manifest.json");
  return m;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string join_strategies(const std::vector<Strategy>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::string(to_string(v[i]));
  return s;
}

RunManifest do_sweep(const ConfigFile& cfg, std::uint64_t seed, const std::vector<Strategy>& strategies,
                     const std::vector<int>& n_list, std::size_t trials, unsigned jobs, const fs::path& out,
                     bool quiet, std::size_t* failures) {
  if (trials < 1) throw ValidationError("--trials must be at least 1");
  if (n_list.empty()) throw ValidationError("--n-list must name at least one school size");
  if (strategies.empty()) throw ValidationError("--strategy must name at least one strategy");
  const auto start = Clock::now();
  const SweepTable table = sweep_school_size(cfg.params, n_list, strategies, trials, seed, jobs);
  write_sweep(table, out);
  for (const SweepRow& r : table.rows)
    note(quiet, fmt::format("N={:4} {:8} P_eaten={:.4f} t_alive={:.1f}", r.n, to_string(r.strategy),
                            r.p_eaten_mean, r.t_alive_mean));
  for (const TrialFailure& f : table.failures)
    fmt::print(stderr, "predswarm: trial {} (seed {}) diverged: {}\n", f.index, f.seed, f.message);
  if (failures) *failures = table.failures.size();

  RunManifest m = make_manifest(cfg, seed, "sweep");
  m.arguments["out"] = out.filename().string();
  m.arguments["strategy"] = join_strategies(strategies);
  m.arguments["n_list"] = join_ints(n_list);
  m.arguments["trials"] = std::to_string(trials);
  m.arguments["failures"] = std::to_string(table.failures.size());
  m.outputs = {out.string()};
  m.wall_seconds = seconds_since(start);
  write_manifest(m, sidecar_manifest(out));
  return m;
}

RunManifest do_metrics(const ConfigFile& cfg, const fs::path& trajectory, std::optional<double> link_dist,
                       const fs::path& out, bool quiet) {
  const auto start = Clock::now();
  const double link = link_dist.value_or(cfg.params.resolved_link_dist());
  if (!(link > 0.0)) throw ValidationError("--link-dist must be positive");
  const auto rows = trajectory_metrics(read_trajectory(trajectory), link);
  write_metrics(rows, out);
  note(quiet, fmt::format("{} frames summarised", rows.size()));

  RunManifest m = make_manifest(cfg, 0, "metrics");
  m.arguments["trajectory"] = fs::absolute(trajectory).string();
  m.arguments["out"] = out.filename().string();
  m.arguments["link_dist"] = format_real(link);
  m.outputs = {out.string()};
  m.wall_seconds = seconds_since(start);
  write_manifest(m, sidecar_manifest(out));
  return m;
}

}  // namespace

ConfigFile resolve_params(const Common& common, const std::string& preset) {
  ConfigFile base;
  if (preset == "sweep-default") {
    base = {sweep_default_params(), "sweep-default"};
  } else if (preset != "custom") {
    const Pattern pat = parse_pattern(preset);
    base = {pattern_preset(pat).params, std::string(roman(pat))};
  }
  if (!common.config) return {validate_params(base.params), base.preset};
  ConfigFile cfg = read_config(*common.config, base.params);
  if (cfg.preset.empty()) cfg.preset = base.preset;
  return cfg;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw ValidationError(fmt::format("bad integer '{}' in list '{}'", item, text));
    out.push_back(value);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<Strategy> parse_strategy_list(const std::string& text) {
  std::vector<Strategy> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    out.push_back(parse_strategy(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

RunManifest school_command(const SchoolOptions& opts) {
  const ConfigFile cfg = resolve_params(opts.common, opts.pattern);
  return do_school(cfg, pick_seed(opts.common), opts.out, opts.common.quiet);
}

RunManifest run_command(const RunOptions& opts) {
  const ConfigFile cfg = resolve_params(opts.common, opts.pattern);
  return do_run(cfg, pick_seed(opts.common), opts.record_every, opts.out_dir, opts.common.quiet);
}

RunManifest sweep_command(const SweepOptions& opts, std::size_t* failures) {
  const ConfigFile cfg = resolve_params(opts.common, "sweep-default");
  return do_sweep(cfg, pick_seed(opts.common), opts.strategies, opts.n_list, opts.trials, opts.common.jobs,
                  opts.out, opts.common.quiet, failures);
}

RunManifest metrics_command(const MetricsOptions& opts) {
  const ConfigFile cfg = resolve_params(opts.common, "custom");
  return do_metrics(cfg, opts.trajectory, opts.link_dist, opts.out, opts.common.quiet);
}

RunManifest replay_command(const fs::path& manifest_path, const fs::path& out_dir, bool quiet) {
  const RunManifest m = read_manifest(manifest_path);
  const ConfigFile cfg{m.params, m.preset};
  auto arg = [&](const char* key) {
    const auto it = m.arguments.find(key);
    if (it == m.arguments.end())
      throw ParseError(fmt::format("{}: manifest lacks argument '{}'", manifest_path.string(), key));
    return it->second;
  };
  if (m.subcommand == "school") return do_school(cfg, m.seed, out_dir / arg("out"), quiet);
  if (m.subcommand == "run") return do_run(cfg, m.seed, std::stol(arg("record_every")), out_dir, quiet);
  if (m.subcommand == "sweep")
    return do_sweep(cfg, m.seed, parse_strategy_list(arg("strategy")), parse_int_list(arg("n_list")),
                    std::stoul(arg("trials")), 1, out_dir / arg("out"), quiet, nullptr);
  if (m.subcommand == "metrics")
    return do_metrics(cfg, arg("trajectory"), std::stod(arg("link_dist")), out_dir / arg("out"), quiet);
  throw ParseError(fmt::format("{}: unknown subcommand '{}'", manifest_path.string(), m.subcommand));
}

}  // namespace predswarm::cli
