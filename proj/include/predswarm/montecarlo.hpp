#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "predswarm/core.hpp"
#include "predswarm/metrics.hpp"
#include "predswarm/predation.hpp"

namespace predswarm {

/// Metric-frame spacing used when a trial is only summarised.
inline constexpr long kSummaryRecordEvery = 10;

/// One complete trial: generate_school, predator_spawn, run_predation, all
/// drawing from a single NoiseSource seeded with `seed`.
TrialRecord run_trial(const SimParams& params, std::uint64_t seed, const RecordOptions& options = {});

struct TrialSummary {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double p_eaten = 0.0;  // P_eaten(t_max)
  double t_alive = 0.0;  // average living time, steps
  int n_eaten = 0;
  PatternLabel label = PatternLabel::Unclassified;
};

struct TrialFailure {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  long step = 0;
  std::string message;
};

struct TrialBatch {
  std::vector<TrialSummary> trials;  // completed trials, in index order
  std::vector<TrialFailure> failures;
};

TrialSummary summarize(const TrialRecord& rec, const SimParams& params, std::size_t index,
                       std::uint64_t seed);

/// Runs `body(k)` for k = 0..n-1 on up to `jobs` threads. Indices are handed
/// out dynamically; callers store results by index.
void for_each_trial(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

/// Trial k uses the stream seeded with derive_seed(base_seed, k). Divergent
/// trials are reported in `failures` and do not stop the others.
TrialBatch run_trials(const SimParams& params, std::size_t n_trials, std::uint64_t base_seed,
                      unsigned jobs = 1);

/// Same seeding as run_trials but keeps every record; failed trials are
/// std::nullopt.
std::vector<std::optional<TrialRecord>> run_trial_records(const SimParams& params, std::size_t n_trials,
                                                          std::uint64_t base_seed, unsigned jobs,
                                                          const RecordOptions& options);

struct SweepRow {
  int n = 0;
  Strategy strategy = Strategy::CenterAttack;
  std::size_t trials = 0;  // completed trials behind every statistic
  std::size_t failures = 0;
  double p_eaten_mean = 0.0;
  double p_eaten_std = 0.0;
  double p_eaten_min = 0.0;
  double p_eaten_max = 0.0;
  double p_eaten_q25 = 0.0;
  double p_eaten_q50 = 0.0;
  double p_eaten_q75 = 0.0;
  double t_alive_mean = 0.0;
  double t_alive_std = 0.0;
  double n_eaten_mean = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<TrialFailure> failures;
};

/// Seed of the trial batch for school size `n` within a sweep. Shared by both
/// strategies, so they face the same schools.
std::uint64_t sweep_batch_seed(std::uint64_t base_seed, int n) noexcept;

/// One run_trials batch per (N, strategy) on top of `base_params`.
SweepTable sweep_school_size(const SimParams& base_params, std::span<const int> n_values,
                             std::span<const Strategy> strategies, std::size_t n_trials,
                             std::uint64_t base_seed, unsigned jobs = 1);

struct SampleStats {
  double mean = 0.0;
  double std = 0.0;  // sample (n - 1) standard deviation, 0 for one sample
  double min = 0.0;
  double max = 0.0;
};

SampleStats sample_stats(std::span<const double> values);

/// Linear-interpolation quantile (Hyndman-Fan type 7) of unsorted values.
double quantile(std::vector<double> values, double prob);

}  // namespace predswarm
