#pragma once

#include <vector>

#include "predswarm/core.hpp"
#include "predswarm/noise.hpp"
#include "predswarm/survival.hpp"

namespace predswarm {

/// Prey eaten during one step. May hold several ids.
struct StepEvents {
  std::vector<std::size_t> eaten_ids;
  long step_index = 0;
};

/// Repulsion of a prey at `xi` from a predator at `y`.
Vector flight_force(std::span<const double> xi, std::span<const double> y, const SimParams& params);

/// Pull toward the mean position and velocity of the alive prey.
Vector hunting_force_center(const SwarmState& state, const PredatorState& pred, const SimParams& params);

/// Distance-weighted average of the pulls toward every alive prey.
Vector hunting_force_nearest(const SwarmState& state, const PredatorState& pred, const SimParams& params);

/// Dispatches on params.strategy.
Vector hunting_force(const SwarmState& state, const PredatorState& pred, const SimParams& params);

/// Pairwise coupling among alive prey plus flight from the predator. Rows of
/// eaten prey are zero.
Coords prey_acceleration(const SwarmState& state, const PredatorState& pred, const SimParams& params);

struct StepResult {
  SwarmState swarm;
  PredatorState predator;
  StepEvents events;
};

/// One predation step at time index `t`:
///   1. prey and predator positions advance with pre-step velocities plus
///      Wiener increments (prey rows first, in index order, then predator);
///   2. prey velocities advance with prey_acceleration at the new positions;
///   3. predator velocity advances with the hunting force at the new state;
///   4. prey speeds are capped when cap_prey_velocity is set;
///   5. every alive prey strictly closer than m * r to the predator is eaten.
StepResult predation_step(const SwarmState& state, const PredatorState& pred, const SimParams& params,
                          NoiseSource& src, long t);

/// In-place form of predation_step. Returns the ids eaten this step.
std::vector<std::size_t> advance_predation(SwarmState& state, PredatorState& pred,
                                           const SimParams& params, NoiseSource& src, long t);

/// Predator at distance spawn_dist from the school center along a uniformly
/// random direction, at rest.
PredatorState predator_spawn(const SwarmState& school, const SimParams& params, NoiseSource& src);

struct RecordOptions {
  /// Metric frames every this many steps (plus the initial and final step);
  /// 0 disables them.
  long record_every = 0;
  /// Also keep full state snapshots at the recorded steps.
  bool keep_frames = false;
};

/// Iterates predation_step for t = 1..t_max, stopping once nobody survives.
/// Throws DivergenceError carrying the failing step.
TrialRecord run_predation(SwarmState initial, PredatorState pred0, const SimParams& params,
                          NoiseSource& src, const RecordOptions& options = {});

}  // namespace predswarm
