#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "predswarm/io.hpp"
#include "predswarm/montecarlo.hpp"

using namespace predswarm;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("predswarm_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::string parse_error(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.what();
  } catch (const ValidationError& e) {
    return std::string("validation: ") + e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("pattern line loads the preset") {
  const ConfigFile c = parse_config("pattern = IV\n");
  CHECK(c.params == pattern_preset(Pattern::MaintainFormation).params);
  CHECK(c.preset == "IV");
}

TEST_CASE("explicit keys override the preset wherever they appear") {
  const ConfigFile a = parse_config("pattern = IV\ndelta = 0.2\n");
  const ConfigFile b = parse_config("delta = 0.2\npattern = IV\n");
  SimParams expect = pattern_preset(Pattern::MaintainFormation).params;
  expect.delta = 0.2;
  CHECK(a.params == expect);
  CHECK(b.params == expect);
}

TEST_CASE("config errors") {
  CHECK(parse_error("alpha = -1\n").find("alpha must be positive") != std::string::npos);
  CHECK(parse_error("alpha = 1\nalpha = 2\n").find(":2: duplicate key 'alpha'") != std::string::npos);
  CHECK(parse_error("# comment\nalfa = 1\n").find(":2: unknown key 'alfa'") != std::string::npos);
  CHECK(parse_error("alpha 1\n").find("expected 'key = value'") != std::string::npos);
  CHECK(parse_error("alpha = fast\n").find("alpha: expected a number") != std::string::npos);
  CHECK(parse_error("pattern = VII\n").find("unknown preset") != std::string::npos);
  CHECK(parse_error("n_prey = 2.5\n").find("n_prey") != std::string::npos);
  CHECK(parse_error("q_exp = 3\n").find("q must exceed p") != std::string::npos);
}

TEST_CASE("comments, blank lines and auto values") {
  const ConfigFile c = parse_config("\n  # header\nspawn_dist = 4.5   # trailing\nhalf_width = auto\n\n");
  CHECK(c.params.spawn_dist == 4.5);
  CHECK_FALSE(c.params.half_width.has_value());
  CHECK(c.preset.empty());
}

TEST_CASE("config text round-trips every value exactly") {
  SimParams p = pattern_preset(Pattern::Scattered).params;
  p.alpha = 0.1 + 0.2;
  p.sigma_prey = 1.0 / 3.0;
  p.eps_dist = 1e-300;
  p.half_width = 2.0 / 7.0;
  p.cap_prey_velocity = false;
  p.dims = 3;
  const ConfigFile back = parse_config(to_config_text(p));
  CHECK(back.params == p);

  for (const std::string& key : config_keys())
    if (key != "pattern" && key != "preset") CHECK(to_config_text(p).find(key + " = ") != std::string::npos);
}

TEST_CASE("shipped fixtures match the built-in presets") {
  const fs::path dir = PREDSWARM_CONFIG_DIR;
  CHECK(load_config(dir / "pattern_I.cfg") == pattern_preset(Pattern::SplitReunion).params);
  CHECK(load_config(dir / "pattern_II.cfg") == pattern_preset(Pattern::SplitTwoGroups).params);
  CHECK(load_config(dir / "pattern_III.cfg") == pattern_preset(Pattern::Scattered).params);
  CHECK(load_config(dir / "pattern_IV.cfg") == pattern_preset(Pattern::MaintainFormation).params);
  CHECK(load_config(dir / "sweep_default.cfg") == sweep_default_params());
}

TEST_CASE("missing config file is reported") {
  CHECK_THROWS(load_config("/nonexistent/predswarm.cfg"));
}

TEST_CASE("school CSV round-trips bitwise") {
  const fs::path dir = scratch_dir("school");
  NoiseSource src(4);
  SwarmState s(9, 3);
  s.positions = uniform_positions(src, 9, 3, 1.7);
  for (double& v : s.velocities.values()) v = src.normal() / 3.0;
  write_school(s, dir / "school.csv");
  CHECK(first_line(dir / "school.csv") == "id,x1,x2,x3,v1,v2,v3");
  const SwarmState back = read_school(dir / "school.csv");
  CHECK(bits_equal(back.positions.values(), s.positions.values()));
  CHECK(bits_equal(back.velocities.values(), s.velocities.values()));
}

TEST_CASE("trajectory CSV round-trips bitwise, dead rows included") {
  const fs::path dir = scratch_dir("traj");
  SimParams p = sweep_default_params();
  p.n_prey = 5;
  p.t_max_school = 100;
  p.t_max = 300;
  p.spawn_dist = 0.5;
  p.m_catch = 1.0;
  const TrialRecord rec = run_trial(p, 11, {25, true});
  REQUIRE(rec.n_eaten() > 0);
  write_trajectory(rec, dir / "trajectory.csv");
  CHECK(first_line(dir / "trajectory.csv") == "step,agent_id,kind,alive,x1,x2,v1,v2");

  const std::vector<Frame> back = read_trajectory(dir / "trajectory.csv");
  REQUIRE(back.size() == rec.frames.size());
  for (std::size_t f = 0; f < back.size(); ++f) {
    CHECK(back[f].step == rec.frames[f].step);
    CHECK(back[f].swarm.alive == rec.frames[f].swarm.alive);
    CHECK(bits_equal(back[f].swarm.positions.values(), rec.frames[f].swarm.positions.values()));
    CHECK(bits_equal(back[f].swarm.velocities.values(), rec.frames[f].swarm.velocities.values()));
    CHECK(bits_equal(back[f].predator.position, rec.frames[f].predator.position));
    CHECK(bits_equal(back[f].predator.velocity, rec.frames[f].predator.velocity));
  }
}

TEST_CASE("survival CSV with nobody eaten holds N on every row") {
  const fs::path dir = scratch_dir("surv");
  TrialRecord rec;
  rec.n_initial = 4;
  rec.t_max = 6;
  rec.steps_run = 6;
  rec.n_survived.assign(7, 4);
  write_survival(rec, dir / "survival.csv");
  CHECK(slurp(dir / "survival.csv") == "step,n_survived\n0,4\n1,4\n2,4\n3,4\n4,4\n5,4\n6,4\n");
}

TEST_CASE("sweep CSV header") {
  const fs::path dir = scratch_dir("sweep");
  SweepTable t;
  t.rows.push_back({});
  write_sweep(t, dir / "sweep.csv");
  CHECK(first_line(dir / "sweep.csv") ==
        "n,strategy,trials,p_eaten_mean,p_eaten_std,p_eaten_q25,p_eaten_q50,p_eaten_q75,t_alive_mean,"
        "t_alive_std,n_eaten_mean");
}

TEST_CASE("trajectory metrics recover survival quantities") {
  const fs::path dir = scratch_dir("metrics");
  SimParams p = sweep_default_params();
  p.n_prey = 5;
  p.t_max_school = 100;
  p.t_max = 300;
  p.spawn_dist = 1.0;
  const TrialRecord rec = run_trial(p, 11, {1, true});
  const auto rows = trajectory_metrics(rec.frames, p.resolved_link_dist());
  REQUIRE(rows.size() == rec.frames.size());
  const auto pe = p_eaten_series(rec);
  for (const MetricsRow& r : rows) {
    CHECK(r.n_survived == rec.n_survived[r.step]);
    CHECK(r.p_eaten == pe[r.step]);
  }
  write_metrics(rows, dir / "metrics.csv");
  CHECK(first_line(dir / "metrics.csv") == "step,diameter,velocity_std,n_groups,n_survived,p_eaten,t_bar_alive");
}

TEST_CASE("manifest round-trips") {
  const fs::path dir = scratch_dir("manifest");
  RunManifest m;
  m.params = pattern_preset(Pattern::SplitReunion).params;
  m.params.sigma_prey = 0.1 + 0.2;
  m.seed = 18446744073709551557ULL;
  m.subcommand = "run";
  m.preset = "I";
  m.outputs = {"a.csv", "b.csv"};
  m.arguments["record_every"] = "7";
  write_manifest(m, dir / "manifest.json");
  const RunManifest back = read_manifest(dir / "manifest.json");
  CHECK(back.params == m.params);
  CHECK(back.seed == m.seed);
  CHECK(back.subcommand == "run");
  CHECK(back.preset == "I");
  CHECK(back.version == kVersion);
  CHECK(back.outputs == m.outputs);
  CHECK(back.arguments == m.arguments);
}

TEST_CASE("malformed CSV is a ParseError") {
  const fs::path dir = scratch_dir("bad");
  std::ofstream(dir / "bad.csv") << "id,x1,x2,v1,v2\n0,1,2,3\n";
  CHECK_THROWS_AS(read_school(dir / "bad.csv"), ParseError);
  std::ofstream(dir / "bad2.csv") << "step,agent_id,kind,alive,x1,x2,v1,v2\n0,0,shark,1,0,0,0,0\n";
  CHECK_THROWS_AS(read_trajectory(dir / "bad2.csv"), ParseError);
}
