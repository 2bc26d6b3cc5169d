#include "predswarm/predation.hpp"

#include <cmath>
#include <fmt/format.h>

#include "kernels.hpp"
#include "predswarm/metrics.hpp"

namespace predswarm {

namespace {

// Adds -w [gamma1 (y - x) + gamma1 gamma2 (v - u)] into `out`, where
// w = (R2 / |y - x|)^theta2.
void add_pursuit(const double* y, const double* v, const double* x, const double* u, int dims,
                 const SimParams& params, double scale, double* out) {
  double dy[3];
  double d2 = 0.0;
  for (int k = 0; k < dims; ++k) {
    dy[k] = y[k] - x[k];
    d2 += dy[k] * dy[k];
  }
  const double dist = std::max(std::sqrt(d2), params.eps_dist);
  const double w = std::pow(params.r2_hunt / dist, params.theta2);
  for (int k = 0; k < dims; ++k)
    out[k] -= scale * w * (params.gamma1 * dy[k] + params.gamma1 * params.gamma2 * (v[k] - u[k]));
}

void require_alive(const SwarmState& state) {
  if (state.n_alive() == 0) throw std::invalid_argument("hunting force needs at least one alive prey");
}

}  // namespace

Vector flight_force(std::span<const double> xi, std::span<const double> y, const SimParams& params) {
  Vector out(xi.size(), 0.0);
  detail::add_flight(xi.data(), y.data(), static_cast<int>(xi.size()), params, out.data());
  return out;
}

Vector hunting_force_center(const SwarmState& state, const PredatorState& pred, const SimParams& params) {
  require_alive(state);
  const auto [xc, vc] = school_center(state);
  Vector out(state.dims(), 0.0);
  add_pursuit(pred.position.data(), pred.velocity.data(), xc.data(), vc.data(), state.dims(), params,
              1.0, out.data());
  return out;
}

Vector hunting_force_nearest(const SwarmState& state, const PredatorState& pred, const SimParams& params) {
  require_alive(state);
  const int d = state.dims();
  Vector sum(d, 0.0);
  for (std::size_t j = 0; j < state.size(); ++j) {
    if (!state.alive[j]) continue;
    add_pursuit(pred.position.data(), pred.velocity.data(), state.positions.row(j).data(),
                state.velocities.row(j).data(), d, params, 1.0, sum.data());
  }
  const double n = static_cast<double>(state.n_alive());
  for (double& s : sum) s /= n;
  return sum;
}

Vector hunting_force(const SwarmState& state, const PredatorState& pred, const SimParams& params) {
  return params.strategy == Strategy::CenterAttack ? hunting_force_center(state, pred, params)
                                                   : hunting_force_nearest(state, pred, params);
}

Coords prey_acceleration(const SwarmState& state, const PredatorState& pred, const SimParams& params) {
  const int d = state.dims();
  Coords acc(state.size(), d);
  const auto rows = state.alive_indices();
  detail::accumulate_pairs(d, state.positions.values().data(), state.velocities.values().data(), rows,
                           detail::Coupling(params), acc.values().data());
  for (std::size_t i : rows)
    detail::add_flight(state.positions.row(i).data(), pred.position.data(), d, params, acc.row(i).data());
  return acc;
}

std::vector<std::size_t> advance_predation(SwarmState& state, PredatorState& pred,
                                           const SimParams& params, NoiseSource& src, long t) {
  const int d = state.dims();
  const double dt = params.dt;
  auto& x = state.positions.values();
  auto& v = state.velocities.values();
  const auto rows = state.alive_indices();

  // (1) positions
  std::vector<double> noise(rows.size() * d);
  fill_wiener(src, noise, params.sigma_prey, dt);
  double pred_noise[3];
  fill_wiener(src, std::span<double>(pred_noise, d), params.sigma_pred, dt);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const std::size_t i = rows[a];
    for (int k = 0; k < d; ++k) x[i * d + k] += v[i * d + k] * dt + noise[a * d + k];
  }
  for (int k = 0; k < d; ++k) pred.position[k] += pred.velocity[k] * dt + pred_noise[k];

  // (2) prey velocities
  const Coords acc = prey_acceleration(state, pred, params);
  for (std::size_t i : rows)
    for (int k = 0; k < d; ++k) v[i * d + k] += acc(i, k) * dt;

  // (3) predator velocity
  const Vector force = hunting_force(state, pred, params);
  for (int k = 0; k < d; ++k) pred.velocity[k] += force[k] * dt;

  // (4) speed cap
  if (params.cap_prey_velocity) detail::cap_speeds(v.data(), d, rows, params.v_max);

  if (!detail::all_finite(x) || !detail::all_finite(v) || !detail::all_finite(pred.position) ||
      !detail::all_finite(pred.velocity))
    throw DivergenceError(fmt::format("predation diverged at step {}", t), t);

  // (5) being eaten: strictly inside m * r
  const double catch2 = (params.m_catch * params.r_crit) * (params.m_catch * params.r_crit);
  std::vector<std::size_t> eaten;
  for (std::size_t i : rows) {
    double d2 = 0.0;
    for (int k = 0; k < d; ++k) {
      const double diff = pred.position[k] - x[i * d + k];
      d2 += diff * diff;
    }
    if (d2 < catch2) eaten.push_back(i);
  }
  for (std::size_t i : eaten) state.alive[i] = 0;
  return eaten;
}

StepResult predation_step(const SwarmState& state, const PredatorState& pred, const SimParams& params,
                          NoiseSource& src, long t) {
  StepResult out{state, pred, {{}, t}};
  out.events.eaten_ids = advance_predation(out.swarm, out.predator, params, src, t);
  return out;
}

PredatorState predator_spawn(const SwarmState& school, const SimParams& params, NoiseSource& src) {
  const auto [xc, vc] = school_center(school);
  const Vector dir = random_direction(src, school.dims());
  const double dist = params.resolved_spawn_dist();
  PredatorState pred{Vector(school.dims()), Vector(school.dims(), 0.0)};
  for (int k = 0; k < school.dims(); ++k) pred.position[k] = xc[k] + dist * dir[k];
  return pred;
}

TrialRecord run_predation(SwarmState state, PredatorState pred, const SimParams& params,
                          NoiseSource& src, const RecordOptions& options) {
  TrialRecord rec;
  rec.n_initial = static_cast<int>(state.n_alive());
  rec.t_max = params.t_max;
  rec.n_survived.assign(params.t_max + 1, 0);
  rec.n_survived[0] = rec.n_initial;

  const double link = params.resolved_link_dist();
  auto record = [&](long t) {
    if (state.n_alive() > 0) {
      rec.metrics.push_back({t, school_diameter(state), velocity_std(state), count_subgroups(state, link),
                             static_cast<int>(state.n_alive())});
    }
    if (options.keep_frames) rec.frames.push_back({t, state, pred});
  };
  const bool recording = options.record_every > 0;
  if (recording) record(0);

  long t = 1;
  for (; t <= params.t_max; ++t) {
    for (std::size_t id : advance_predation(state, pred, params, src, t)) rec.eaten_times[id] = t;
    const int alive = static_cast<int>(state.n_alive());
    rec.n_survived[t] = alive;
    if (alive == 0) break;
    if (recording && t % options.record_every == 0 && t != params.t_max) record(t);
  }
  rec.steps_run = std::min(t, params.t_max);
  if (recording) record(rec.steps_run);
  return rec;
}

}  // namespace predswarm
