#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace predswarm {

/// A d-vector (d = 2 or 3) handed across the public API.
using Vector = std::vector<double>;

enum class Strategy { CenterAttack, NearestAttack };

enum class Pattern { SplitReunion, SplitTwoGroups, Scattered, MaintainFormation };

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an integrator produces a non-finite coordinate.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Every model coefficient, integration setting and diagnostic threshold of a
/// run. Field names double as configuration keys.
struct SimParams {
  int n_prey = 30;
  int dims = 2;

  // prey-prey coupling
  double alpha = 15.0;
  double beta = 0.5;
  double p_exp = 4.0;
  double q_exp = 6.0;
  double r_crit = 1.0;
  double k_friction = 0.5;  // schooling phase only

  // prey flight
  double delta = 1.0;
  double r1_flee = 3.0;
  double theta1 = 1.0;

  // predator pursuit
  double r2_hunt = 5.0;
  double theta2 = 0.5;
  double gamma1 = 0.08;
  double gamma2 = 0.1;
  Strategy strategy = Strategy::NearestAttack;
  double m_catch = 0.5;

  // integration
  double sigma_prey = 0.05;
  double sigma_pred = 0.05;
  double dt = 5e-3;
  long t_max = 3000;
  long t_max_school = 2000;
  double v_max = 2.0;
  bool cap_prey_velocity = true;
  double eps_dist = 1e-8;

  // geometry of the initial condition; unset means "derive from r and N"
  std::optional<double> half_width;  // r N^(1/d) / 2
  std::optional<double> spawn_dist;  // 2 R1

  // pattern classifier
  std::optional<double> link_dist;  // 3 r
  double scatter_ratio = 3.0;
  double reunion_ratio = 1.5;
  double maintain_tol = 0.25;

  double resolved_half_width() const;
  double resolved_spawn_dist() const;
  double resolved_link_dist() const;

  friend bool operator==(const SimParams&, const SimParams&) = default;
};

/// Returns `raw` unchanged when every constraint holds, otherwise throws a
/// ValidationError naming the first violated one.
SimParams validate_params(const SimParams& raw);

/// Row-major rows x dims block of coordinates.
class Coords {
 public:
  Coords() = default;
  Coords(std::size_t rows, int dims) : rows_(rows), dims_(dims), data_(rows * dims, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  int dims() const noexcept { return dims_; }

  std::span<double> row(std::size_t i) {
    return {data_.data() + i * dims_, static_cast<std::size_t>(dims_)};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dims_, static_cast<std::size_t>(dims_)};
  }
  double& operator()(std::size_t i, int k) { return data_[i * dims_ + k]; }
  double operator()(std::size_t i, int k) const { return data_[i * dims_ + k]; }

  std::vector<double>& values() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  friend bool operator==(const Coords&, const Coords&) = default;

 private:
  std::size_t rows_ = 0;
  int dims_ = 2;
  std::vector<double> data_;
};

/// Prey school at one instant. Eaten prey keep their row with frozen values.
struct SwarmState {
  Coords positions;
  Coords velocities;
  std::vector<char> alive;

  SwarmState() = default;
  SwarmState(std::size_t n, int dims)
      : positions(n, dims), velocities(n, dims), alive(n, 1) {}

  std::size_t size() const noexcept { return alive.size(); }
  int dims() const noexcept { return positions.dims(); }
  std::size_t n_alive() const noexcept;
  std::vector<std::size_t> alive_indices() const;
  /// Copy holding only the alive rows, in index order.
  SwarmState survivors() const;

  friend bool operator==(const SwarmState&, const SwarmState&) = default;
};

struct PredatorState {
  Vector position;
  Vector velocity;

  friend bool operator==(const PredatorState&, const PredatorState&) = default;
};

struct PatternPreset {
  Pattern label;
  SimParams params;
  Strategy strategy;
};

/// Coefficients for `label` plus the calibrated fixture geometry.
PatternPreset pattern_preset(Pattern label);

/// Fixed-coefficient parameter set used for the school-size sweeps, with the
/// calibrated catch multiplier and noise levels.
SimParams sweep_default_params();

std::string_view to_string(Strategy s);
std::string_view to_string(Pattern p);
/// Roman numeral label ("I".."IV").
std::string_view roman(Pattern p);
Strategy parse_strategy(std::string_view text);
/// Accepts roman numerals or the enum spelling.
Pattern parse_pattern(std::string_view text);

}  // namespace predswarm
