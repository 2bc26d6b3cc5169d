#pragma once

#include "predswarm/core.hpp"
#include "predswarm/noise.hpp"

namespace predswarm {

/// Position-coupling and velocity-matching terms exerted on prey i by prey j.
struct PairForce {
  Vector position;
  Vector velocity;
};

PairForce pair_interaction(std::span<const double> xi, std::span<const double> xj,
                           std::span<const double> vi, std::span<const double> vj,
                           const SimParams& params);

/// One predator-free step: positions advance with the pre-step velocities plus
/// a Wiener increment, velocities then advance with the pairwise terms and
/// friction evaluated at the new positions, and speeds above v_max are
/// rescaled onto the cap.
SwarmState school_step(const SwarmState& state, const SimParams& params, NoiseSource& src);

/// In-place variant used by the integrators; `step` only labels errors.
void advance_school(SwarmState& state, const SimParams& params, NoiseSource& src, long step = 0);

/// Settles a school from uniformly scattered, motionless prey over
/// t_max_school steps, then recentres it on the origin.
///
/// Throws DivergenceError if any coordinate becomes non-finite.
SwarmState generate_school(const SimParams& params, NoiseSource& src);

/// Translates every alive prey so that their mean position is the origin.
void recenter(SwarmState& state);

}  // namespace predswarm
