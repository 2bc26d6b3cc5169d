#include "predswarm/core.hpp"

#include <cmath>
#include <fmt/format.h>

namespace predswarm {

double SimParams::resolved_half_width() const {
  if (half_width) return *half_width;
  return 0.5 * r_crit * std::pow(static_cast<double>(n_prey), 1.0 / dims);
}

double SimParams::resolved_spawn_dist() const { return spawn_dist ? *spawn_dist : 2.0 * r1_flee; }

double SimParams::resolved_link_dist() const { return link_dist ? *link_dist : 3.0 * r_crit; }

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void require_positive(double value, const char* name) {
  require(std::isfinite(value) && value > 0.0, fmt::format("{} must be positive (got {})", name, value));
}

void require_nonnegative(double value, const char* name) {
  require(std::isfinite(value) && value >= 0.0,
          fmt::format("{} must be nonnegative (got {})", name, value));
}

}  // namespace

SimParams validate_params(const SimParams& raw) {
  require(raw.n_prey >= 1, fmt::format("n_prey must be positive (got {})", raw.n_prey));
  require(raw.dims == 2 || raw.dims == 3, fmt::format("dims must be 2 or 3 (got {})", raw.dims));
  require_positive(raw.alpha, "alpha");
  require_positive(raw.beta, "beta");
  require_positive(raw.delta, "delta");
  require_nonnegative(raw.k_friction, "k_friction");
  require(std::isfinite(raw.p_exp) && raw.p_exp > 1.0,
          fmt::format("p must exceed 1 (got p_exp = {})", raw.p_exp));
  require(std::isfinite(raw.q_exp) && raw.q_exp > raw.p_exp,
          fmt::format("q must exceed p (got p_exp = {}, q_exp = {})", raw.p_exp, raw.q_exp));
  require_positive(raw.r_crit, "r_crit");
  require(std::isfinite(raw.r1_flee) && raw.r1_flee > raw.r_crit,
          fmt::format("r1_flee must exceed r_crit (got {} <= {})", raw.r1_flee, raw.r_crit));
  require(std::isfinite(raw.r2_hunt) && raw.r2_hunt > raw.r_crit,
          fmt::format("r2_hunt must exceed r_crit (got {} <= {})", raw.r2_hunt, raw.r_crit));
  require_positive(raw.theta1, "theta1");
  require_positive(raw.theta2, "theta2");
  require_positive(raw.gamma1, "gamma1");
  require_positive(raw.gamma2, "gamma2");
  require(raw.m_catch >= 0.01 && raw.m_catch <= 1.0,
          fmt::format("m out of [0.01, 1] (got m_catch = {})", raw.m_catch));
  require_nonnegative(raw.sigma_prey, "sigma_prey");
  require_nonnegative(raw.sigma_pred, "sigma_pred");
  require_positive(raw.dt, "dt");
  require(raw.t_max >= 1, fmt::format("t_max must be positive (got {})", raw.t_max));
  require(raw.t_max_school >= 0,
          fmt::format("t_max_school must be nonnegative (got {})", raw.t_max_school));
  require_positive(raw.v_max, "v_max");
  require_positive(raw.eps_dist, "eps_dist");
  if (raw.half_width) require_positive(*raw.half_width, "half_width");
  if (raw.spawn_dist) require_positive(*raw.spawn_dist, "spawn_dist");
  if (raw.link_dist) require_positive(*raw.link_dist, "link_dist");
  require_positive(raw.scatter_ratio, "scatter_ratio");
  require_positive(raw.reunion_ratio, "reunion_ratio");
  require_nonnegative(raw.maintain_tol, "maintain_tol");
  return raw;
}

std::size_t SwarmState::n_alive() const noexcept {
  std::size_t n = 0;
  for (char a : alive) n += a ? 1 : 0;
  return n;
}

std::vector<std::size_t> SwarmState::alive_indices() const {
  std::vector<std::size_t> out;
  out.reserve(alive.size());
  for (std::size_t i = 0; i < alive.size(); ++i)
    if (alive[i]) out.push_back(i);
  return out;
}

SwarmState SwarmState::survivors() const {
  const auto idx = alive_indices();
  SwarmState out(idx.size(), dims());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    for (int c = 0; c < dims(); ++c) {
      out.positions(k, c) = positions(idx[k], c);
      out.velocities(k, c) = velocities(idx[k], c);
    }
  }
  return out;
}

PatternPreset pattern_preset(Pattern label) {
  struct Row {
    double alpha, beta, delta, p, theta1, theta2, gamma1, gamma2;
    Strategy strategy;
  };
  // Per-pattern coefficients and attack strategy.
  static constexpr Row kRows[] = {
      {15.0, 0.5, 1.0, 4.0, 1.0, 0.5, 0.08, 0.1, Strategy::NearestAttack},
      {1.0, 0.5, 1.0, 4.0, 5.0, 1.0, 0.1, 0.1, Strategy::CenterAttack},
      {1.0, 0.5, 5.0, 2.0, 1.0, 2.0, 1.0, 0.1, Strategy::NearestAttack},
      {2.0, 0.5, 0.1, 2.0, 1.0, 1.0, 5.0, 10.0, Strategy::CenterAttack},
  };
  const Row& row = kRows[static_cast<int>(label)];

  SimParams p;
  p.alpha = row.alpha;
  p.beta = row.beta;
  p.delta = row.delta;
  p.p_exp = row.p;
  p.q_exp = row.p + 2.0;
  p.theta1 = row.theta1;
  p.theta2 = row.theta2;
  p.gamma1 = row.gamma1;
  p.gamma2 = row.gamma2;
  p.strategy = row.strategy;
  // Fixture geometry shared by all four patterns (see configs/pattern_*.cfg).
  p.r1_flee = 6.0;
  p.r2_hunt = 8.0;
  p.t_max_school = 300;
  p.spawn_dist = 10.0;
  p.link_dist = 1.0;
  return {label, p, row.strategy};
}

SimParams sweep_default_params() {
  SimParams p;
  p.alpha = 15.0;
  p.beta = 1.0;
  p.delta = 1.0;
  p.p_exp = 4.0;
  p.q_exp = 6.0;
  p.theta1 = 0.1;
  p.theta2 = 0.5;
  p.gamma1 = 0.1;
  p.gamma2 = 0.1;
  p.strategy = Strategy::CenterAttack;
  p.m_catch = 0.4;
  p.sigma_prey = 0.01;
  p.sigma_pred = 0.01;
  return p;
}

std::string_view to_string(Strategy s) {
  return s == Strategy::CenterAttack ? "center" : "nearest";
}

std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::SplitReunion: return "SplitReunion";
    case Pattern::SplitTwoGroups: return "SplitTwoGroups";
    case Pattern::Scattered: return "Scattered";
    case Pattern::MaintainFormation: return "MaintainFormation";
  }
  return "?";
}

std::string_view roman(Pattern p) {
  static constexpr std::string_view kNames[] = {"I", "II", "III", "IV"};
  return kNames[static_cast<int>(p)];
}

Strategy parse_strategy(std::string_view text) {
  if (text == "center" || text == "CenterAttack" || text == "I") return Strategy::CenterAttack;
  if (text == "nearest" || text == "NearestAttack" || text == "II") return Strategy::NearestAttack;
  throw ValidationError(fmt::format("unknown strategy '{}' (expected center or nearest)", text));
}

Pattern parse_pattern(std::string_view text) {
  for (Pattern p : {Pattern::SplitReunion, Pattern::SplitTwoGroups, Pattern::Scattered,
                    Pattern::MaintainFormation}) {
    if (text == roman(p) || text == to_string(p)) return p;
  }
  throw ValidationError(fmt::format("unknown pattern '{}' (expected I, II, III or IV)", text));
}

}  // namespace predswarm
