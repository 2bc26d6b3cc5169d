#pragma once

#include <map>
#include <vector>

#include "predswarm/core.hpp"

namespace predswarm {

/// School summary at one recorded step.
struct MetricFrame {
  long step = 0;
  double diameter = 0.0;
  double velocity_std = 0.0;
  int n_groups = 0;
  int n_survived = 0;
};

/// Full snapshot at one recorded step.
struct Frame {
  long step = 0;
  SwarmState swarm;
  PredatorState predator;
};

/// Outcome of one predation run.
///
/// `n_survived[t]` holds the survivor count after step t, for t = 0..t_max; a
/// run that ends early because every prey was eaten is padded with zeros.
struct TrialRecord {
  int n_initial = 0;
  long t_max = 0;
  long steps_run = 0;
  std::vector<int> n_survived;
  std::map<std::size_t, long> eaten_times;
  std::vector<MetricFrame> metrics;
  std::vector<Frame> frames;

  int n_eaten() const { return n_initial - n_survived.back(); }
};

/// Throws std::invalid_argument if the record breaks its invariants.
void check_record(const TrialRecord& rec);

/// Probability of an individual prey having been eaten, accumulated step by
/// step from the survivor counts: P(0) = 0,
/// P(t) = P(t-1) + (N(t-1) - N(t)) / N.
std::vector<double> p_eaten_series(const TrialRecord& rec);

/// Mean living time in steps; prey never eaten count as t_max.
double average_living_time(const TrialRecord& rec);

}  // namespace predswarm
