#include "predswarm/school.hpp"

#include <fmt/format.h>

#include "kernels.hpp"
#include "predswarm/metrics.hpp"

namespace predswarm {

PairForce pair_interaction(std::span<const double> xi, std::span<const double> xj,
                           std::span<const double> vi, std::span<const double> vj,
                           const SimParams& params) {
  const std::size_t d = xi.size();
  const detail::Coupling c(params);
  double d2 = 0.0;
  for (std::size_t k = 0; k < d; ++k) d2 += (xi[k] - xj[k]) * (xi[k] - xj[k]);
  double rp, rq;
  c.powers(d2, rp, rq);
  PairForce out{Vector(d), Vector(d)};
  for (std::size_t k = 0; k < d; ++k) {
    out.position[k] = -c.alpha * (rp - rq) * (xi[k] - xj[k]);
    out.velocity[k] = -c.beta * (rp + rq) * (vi[k] - vj[k]);
  }
  return out;
}

void advance_school(SwarmState& state, const SimParams& params, NoiseSource& src, long step) {
  const int d = state.dims();
  const std::size_t n = state.size();
  auto& x = state.positions.values();
  auto& v = state.velocities.values();
  const auto rows = state.alive_indices();

  std::vector<double> noise(rows.size() * d);
  fill_wiener(src, noise, params.sigma_prey, params.dt);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const std::size_t i = rows[a];
    for (int k = 0; k < d; ++k) x[i * d + k] += v[i * d + k] * params.dt + noise[a * d + k];
  }

  std::vector<double> acc(n * d, 0.0);
  detail::accumulate_pairs(d, x.data(), v.data(), rows, detail::Coupling(params), acc.data());
  for (std::size_t i : rows)
    for (int k = 0; k < d; ++k)
      v[i * d + k] += (acc[i * d + k] - params.k_friction * v[i * d + k]) * params.dt;

  detail::cap_speeds(v.data(), d, rows, params.v_max);

  if (!detail::all_finite(x) || !detail::all_finite(v))
    throw DivergenceError(fmt::format("schooling diverged at step {}", step), step);
}

SwarmState school_step(const SwarmState& state, const SimParams& params, NoiseSource& src) {
  SwarmState next = state;
  advance_school(next, params, src);
  return next;
}

void recenter(SwarmState& state) {
  if (state.n_alive() == 0) return;
  const auto [xc, vc] = school_center(state);
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state.alive[i])
      for (int k = 0; k < state.dims(); ++k) state.positions(i, k) -= xc[k];
}

SwarmState generate_school(const SimParams& params, NoiseSource& src) {
  SwarmState state(params.n_prey, params.dims);
  state.positions =
      uniform_positions(src, params.n_prey, params.dims, params.resolved_half_width());
  for (long t = 1; t <= params.t_max_school; ++t) advance_school(state, params, src, t);
  recenter(state);
  return state;
}

}  // namespace predswarm
