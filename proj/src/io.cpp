#include "predswarm/io.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "predswarm/metrics.hpp"

namespace predswarm {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string csv_real(double x) { return fmt::format("{:.17g}", x); }

struct Field {
  std::string_view name;
  std::function<std::string(const SimParams&)> get;
  std::function<void(SimParams&, std::string_view)> set;  // throws std::invalid_argument
};

template <class T>
Field make_field(std::string_view name, T SimParams::*member) {
  Field f{name, {}, {}};
  f.get = [member](const SimParams& p) -> std::string {
    const T& v = p.*member;
    if constexpr (std::is_same_v<T, double>) {
      return format_real(v);
    } else if constexpr (std::is_same_v<T, std::optional<double>>) {
      return v ? format_real(*v) : std::string("auto");
    } else if constexpr (std::is_same_v<T, bool>) {
      return v ? "true" : "false";
    } else if constexpr (std::is_same_v<T, Strategy>) {
      return std::string(to_string(v));
    } else {
      return std::to_string(v);
    }
  };
  f.set = [member](SimParams& p, std::string_view text) {
    T& v = p.*member;
    if constexpr (std::is_same_v<T, std::optional<double>>) {
      if (text == "auto") {
        v.reset();
        return;
      }
      double x;
      if (!parse_number(text, x)) throw std::invalid_argument("expected a number or 'auto'");
      v = x;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (text == "true" || text == "1")
        v = true;
      else if (text == "false" || text == "0")
        v = false;
      else
        throw std::invalid_argument("expected true or false");
    } else if constexpr (std::is_same_v<T, Strategy>) {
      try {
        v = parse_strategy(text);
      } catch (const ValidationError& e) {
        throw std::invalid_argument(e.what());
      }
    } else {
      if (!parse_number(text, v)) throw std::invalid_argument("expected a number");
    }
  };
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      make_field("n_prey", &SimParams::n_prey),
      make_field("dims", &SimParams::dims),
      make_field("alpha", &SimParams::alpha),
      make_field("beta", &SimParams::beta),
      make_field("p_exp", &SimParams::p_exp),
      make_field("q_exp", &SimParams::q_exp),
      make_field("r_crit", &SimParams::r_crit),
      make_field("k_friction", &SimParams::k_friction),
      make_field("delta", &SimParams::delta),
      make_field("r1_flee", &SimParams::r1_flee),
      make_field("theta1", &SimParams::theta1),
      make_field("r2_hunt", &SimParams::r2_hunt),
      make_field("theta2", &SimParams::theta2),
      make_field("gamma1", &SimParams::gamma1),
      make_field("gamma2", &SimParams::gamma2),
      make_field("strategy", &SimParams::strategy),
      make_field("m_catch", &SimParams::m_catch),
      make_field("sigma_prey", &SimParams::sigma_prey),
      make_field("sigma_pred", &SimParams::sigma_pred),
      make_field("dt", &SimParams::dt),
      make_field("t_max", &SimParams::t_max),
      make_field("t_max_school", &SimParams::t_max_school),
      make_field("v_max", &SimParams::v_max),
      make_field("cap_prey_velocity", &SimParams::cap_prey_velocity),
      make_field("eps_dist", &SimParams::eps_dist),
      make_field("half_width", &SimParams::half_width),
      make_field("spawn_dist", &SimParams::spawn_dist),
      make_field("link_dist", &SimParams::link_dist),
      make_field("scatter_ratio", &SimParams::scatter_ratio),
      make_field("reunion_ratio", &SimParams::reunion_ratio),
      make_field("maintain_tol", &SimParams::maintain_tol),
  };
  return kFields;
}

const Field* find_field(std::string_view name) {
  for (const Field& f : fields())
    if (f.name == name) return &f;
  return nullptr;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("{}: cannot open for reading", path.string()));
  return in;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("{}: cannot open for writing", path.string()));
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("{}: write failed", path.string()));
}

std::string coord_header(int dims) {
  std::string h;
  for (int k = 1; k <= dims; ++k) h += fmt::format(",x{}", k);
  for (int k = 1; k <= dims; ++k) h += fmt::format(",v{}", k);
  return h;
}

int dims_from_header(const std::vector<std::string_view>& cols, std::size_t first, const fs::path& path) {
  const std::size_t n = cols.size() - first;
  if (n != 4 && n != 6) throw ParseError(fmt::format("{}:1: unexpected column count", path.string()));
  return static_cast<int>(n / 2);
}

double field_real(std::string_view text, const fs::path& path, std::size_t line) {
  double x;
  if (!parse_number(text, x))
    throw ParseError(fmt::format("{}:{}: bad number '{}'", path.string(), line, text));
  return x;
}

long field_int(std::string_view text, const fs::path& path, std::size_t line) {
  long x;
  if (!parse_number(text, x))
    throw ParseError(fmt::format("{}:{}: bad integer '{}'", path.string(), line, text));
  return x;
}

}  // namespace

std::string format_real(double x) { return fmt::format("{}", x); }

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Field& f : fields()) out.emplace_back(f.name);
  out.emplace_back("pattern");
  out.emplace_back("preset");
  return out;
}

ConfigFile parse_config(std::string_view text, const SimParams& base, std::string_view origin) {
  struct Entry {
    const Field* field;
    std::string value;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::optional<std::string> preset;
  std::set<std::string, std::less<>> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(fmt::format("{}:{}: expected 'key = value'", origin, line_no));
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError(fmt::format("{}:{}: expected 'key = value'", origin, line_no));
    if (!seen.insert(std::string(key)).second)
      throw ParseError(fmt::format("{}:{}: duplicate key '{}'", origin, line_no, key));

    if (key == "pattern" || key == "preset") {
      if (preset) throw ParseError(fmt::format("{}:{}: more than one preset line", origin, line_no));
      preset = std::string(value);
      continue;
    }
    const Field* f = find_field(key);
    if (!f) throw ParseError(fmt::format("{}:{}: unknown key '{}'", origin, line_no, key));
    entries.push_back({f, std::string(value), line_no});
  }

  ConfigFile out{base, ""};
  if (preset) {
    if (*preset == "sweep-default") {
      out.params = sweep_default_params();
      out.preset = "sweep-default";
    } else {
      try {
        const Pattern pat = parse_pattern(*preset);
        out.params = pattern_preset(pat).params;
        out.preset = std::string(roman(pat));
      } catch (const ValidationError&) {
        throw ParseError(fmt::format("{}: unknown preset '{}'", origin, *preset));
      }
    }
  }
  for (const Entry& e : entries) {
    try {
      e.field->set(out.params, e.value);
    } catch (const std::invalid_argument& err) {
      throw ParseError(fmt::format("{}:{}: {}: {}", origin, e.line, e.field->name, err.what()));
    }
  }
  out.params = validate_params(out.params);
  return out;
}

ConfigFile read_config(const fs::path& path, const SimParams& base) {
  auto in = open_in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), base, path.string());
}

SimParams load_config(const fs::path& path, const SimParams& base) { return read_config(path, base).params; }

std::string to_config_text(const SimParams& params) {
  std::string out;
  for (const Field& f : fields()) out += fmt::format("{} = {}\n", f.name, f.get(params));
  return out;
}

void write_school(const SwarmState& state, const fs::path& path) {
  auto out = open_out(path);
  out << "id" << coord_header(state.dims()) << '\n';
  for (std::size_t i = 0; i < state.size(); ++i) {
    out << i;
    for (int k = 0; k < state.dims(); ++k) out << ',' << csv_real(state.positions(i, k));
    for (int k = 0; k < state.dims(); ++k) out << ',' << csv_real(state.velocities(i, k));
    out << '\n';
  }
  finish(out, path);
}

SwarmState read_school(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(fmt::format("{}: empty file", path.string()));
  const int d = dims_from_header(split_csv(line), 1, path);
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != static_cast<std::size_t>(1 + 2 * d))
      throw ParseError(fmt::format("{}:{}: expected {} columns", path.string(), line_no, 1 + 2 * d));
    std::vector<double> r;
    for (std::size_t c = 1; c < cols.size(); ++c) r.push_back(field_real(cols[c], path, line_no));
    rows.push_back(std::move(r));
  }
  SwarmState state(rows.size(), d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int k = 0; k < d; ++k) {
      state.positions(i, k) = rows[i][k];
      state.velocities(i, k) = rows[i][d + k];
    }
  return state;
}

void write_trajectory(const TrialRecord& rec, const fs::path& path) {
  auto out = open_out(path);
  const int d = rec.frames.empty() ? 2 : rec.frames.front().swarm.dims();
  out << "step,agent_id,kind,alive" << coord_header(d) << '\n';
  for (const Frame& f : rec.frames) {
    for (std::size_t i = 0; i < f.swarm.size(); ++i) {
      out << f.step << ',' << i << ",prey," << (f.swarm.alive[i] ? 1 : 0);
      for (int k = 0; k < d; ++k) out << ',' << csv_real(f.swarm.positions(i, k));
      for (int k = 0; k < d; ++k) out << ',' << csv_real(f.swarm.velocities(i, k));
      out << '\n';
    }
    out << f.step << ",0,predator,1";
    for (int k = 0; k < d; ++k) out << ',' << csv_real(f.predator.position[k]);
    for (int k = 0; k < d; ++k) out << ',' << csv_real(f.predator.velocity[k]);
    out << '\n';
  }
  finish(out, path);
}

std::vector<Frame> read_trajectory(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(fmt::format("{}: empty file", path.string()));
  const int d = dims_from_header(split_csv(line), 4, path);

  struct PreyRow {
    std::size_t id;
    bool alive;
    std::vector<double> values;
  };
  std::vector<Frame> frames;
  std::vector<PreyRow> pending;
  long current = -1;
  Vector pred_x, pred_v;
  bool have_pred = false;

  auto flush = [&] {
    if (current < 0) return;
    if (!have_pred)
      throw ParseError(fmt::format("{}: step {} has no predator row", path.string(), current));
    Frame f;
    f.step = current;
    f.swarm = SwarmState(pending.size(), d);
    for (const PreyRow& r : pending) {
      if (r.id >= pending.size())
        throw ParseError(fmt::format("{}: step {} has non-contiguous prey ids", path.string(), current));
      f.swarm.alive[r.id] = r.alive ? 1 : 0;
      for (int k = 0; k < d; ++k) {
        f.swarm.positions(r.id, k) = r.values[k];
        f.swarm.velocities(r.id, k) = r.values[d + k];
      }
    }
    f.predator = {pred_x, pred_v};
    frames.push_back(std::move(f));
    pending.clear();
    have_pred = false;
  };

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != static_cast<std::size_t>(4 + 2 * d))
      throw ParseError(fmt::format("{}:{}: expected {} columns", path.string(), line_no, 4 + 2 * d));
    const long step = field_int(cols[0], path, line_no);
    if (step != current) {
      flush();
      current = step;
    }
    std::vector<double> values;
    for (std::size_t c = 4; c < cols.size(); ++c) values.push_back(field_real(cols[c], path, line_no));
    if (cols[2] == "prey") {
      pending.push_back({static_cast<std::size_t>(field_int(cols[1], path, line_no)),
                         field_int(cols[3], path, line_no) != 0, std::move(values)});
    } else if (cols[2] == "predator") {
      pred_x.assign(values.begin(), values.begin() + d);
      pred_v.assign(values.begin() + d, values.end());
      have_pred = true;
    } else {
      throw ParseError(fmt::format("{}:{}: unknown kind '{}'", path.string(), line_no, cols[2]));
    }
  }
  flush();
  return frames;
}

void write_survival(const TrialRecord& rec, const fs::path& path) {
  auto out = open_out(path);
  out << "step,n_survived\n";
  for (std::size_t t = 0; t < rec.n_survived.size(); ++t) out << t << ',' << rec.n_survived[t] << '\n';
  finish(out, path);
}

void write_sweep(const SweepTable& table, const fs::path& path) {
  auto out = open_out(path);
  out << "n,strategy,trials,p_eaten_mean,p_eaten_std,p_eaten_q25,p_eaten_q50,p_eaten_q75,"
         "t_alive_mean,t_alive_std,n_eaten_mean\n";
  for (const SweepRow& r : table.rows) {
    out << r.n << ',' << to_string(r.strategy) << ',' << r.trials << ',' << csv_real(r.p_eaten_mean) << ','
        << csv_real(r.p_eaten_std) << ',' << csv_real(r.p_eaten_q25) << ',' << csv_real(r.p_eaten_q50) << ','
        << csv_real(r.p_eaten_q75) << ',' << csv_real(r.t_alive_mean) << ',' << csv_real(r.t_alive_std)
        << ',' << csv_real(r.n_eaten_mean) << '\n';
  }
  finish(out, path);
}

std::vector<MetricsRow> trajectory_metrics(const std::vector<Frame>& frames, double link_dist) {
  std::vector<MetricsRow> rows;
  if (frames.empty()) return rows;
  const std::size_t n = frames.front().swarm.size();
  std::vector<long> eaten_at(n, -1);
  for (const Frame& f : frames) {
    for (std::size_t i = 0; i < n && i < f.swarm.size(); ++i)
      if (!f.swarm.alive[i] && eaten_at[i] < 0) eaten_at[i] = f.step;

    MetricsRow row;
    row.step = f.step;
    row.n_survived = static_cast<int>(f.swarm.n_alive());
    if (row.n_survived > 0) {
      row.diameter = school_diameter(f.swarm);
      row.velocity_std = velocity_std(f.swarm);
      row.n_groups = count_subgroups(f.swarm, link_dist);
    }
    row.p_eaten = static_cast<double>(static_cast<long>(n) - row.n_survived) / static_cast<double>(n);
    if (row.n_survived == static_cast<int>(n)) {
      row.t_bar_alive = static_cast<double>(f.step);
    } else {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += eaten_at[i] >= 0 ? eaten_at[i] : f.step;
      row.t_bar_alive = total / static_cast<double>(n);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_metrics(const std::vector<MetricsRow>& rows, const fs::path& path) {
  auto out = open_out(path);
  out << "step,diameter,velocity_std,n_groups,n_survived,p_eaten,t_bar_alive\n";
  for (const MetricsRow& r : rows) {
    out << r.step << ',' << csv_real(r.diameter) << ',' << csv_real(r.velocity_std) << ',' << r.n_groups
        << ',' << r.n_survived << ',' << csv_real(r.p_eaten) << ',' << csv_real(r.t_bar_alive) << '\n';
  }
  finish(out, path);
}

void write_manifest(const RunManifest& m, const fs::path& path) {
  nlohmann::ordered_json j;
  j["tool"] = "predswarm";
  j["version"] = m.version;
  j["subcommand"] = m.subcommand;
  j["preset"] = m.preset;
  j["seed"] = m.seed;
  j["wall_seconds"] = m.wall_seconds;
  j["config"] = to_config_text(m.params);
  j["arguments"] = m.arguments;
  j["outputs"] = m.outputs;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

RunManifest read_manifest(const fs::path& path) {
  auto in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
    RunManifest m;
    m.version = j.at("version").get<std::string>();
    m.subcommand = j.at("subcommand").get<std::string>();
    m.preset = j.at("preset").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.wall_seconds = j.at("wall_seconds").get<double>();
    m.params = parse_config(j.at("config").get<std::string>(), {}, path.string()).params;
    m.arguments = j.at("arguments").get<std::map<std::string, std::string>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace predswarm
