#include "predswarm/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "predswarm/school.hpp"

namespace predswarm {

TrialRecord run_trial(const SimParams& params, std::uint64_t seed, const RecordOptions& options) {
  NoiseSource src(seed);
  SwarmState school = generate_school(params, src);
  PredatorState pred = predator_spawn(school, params, src);
  return run_predation(std::move(school), std::move(pred), params, src, options);
}

TrialSummary summarize(const TrialRecord& rec, const SimParams& params, std::size_t index,
                       std::uint64_t seed) {
  TrialSummary s;
  s.index = index;
  s.seed = seed;
  s.p_eaten = p_eaten_series(rec).back();
  s.t_alive = average_living_time(rec);
  s.n_eaten = rec.n_eaten();
  std::vector<double> diam, vstd;
  std::vector<int> groups;
  for (const MetricFrame& f : rec.metrics) {
    diam.push_back(f.diameter);
    vstd.push_back(f.velocity_std);
    groups.push_back(f.n_groups);
  }
  s.label = classify_pattern(diam, vstd, groups, params);
  return s;
}

void for_each_trial(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t k = next++; k < n; k = next++) {
          try {
            body(k);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<std::optional<TrialRecord>> run_trial_records(const SimParams& params, std::size_t n_trials,
                                                          std::uint64_t base_seed, unsigned jobs,
                                                          const RecordOptions& options) {
  std::vector<std::optional<TrialRecord>> out(n_trials);
  for_each_trial(n_trials, jobs, [&](std::size_t k) {
    try {
      out[k] = run_trial(params, derive_seed(base_seed, k), options);
    } catch (const DivergenceError&) {
      out[k].reset();
    }
  });
  return out;
}

TrialBatch run_trials(const SimParams& params, std::size_t n_trials, std::uint64_t base_seed,
                      unsigned jobs) {
  if (n_trials < 1) throw ValidationError("n_trials must be at least 1");
  struct Slot {
    std::optional<TrialSummary> summary;
    std::optional<TrialFailure> failure;
  };
  std::vector<Slot> slots(n_trials);
  const RecordOptions options{kSummaryRecordEvery, false};
  for_each_trial(n_trials, jobs, [&](std::size_t k) {
    const std::uint64_t seed = derive_seed(base_seed, k);
    try {
      slots[k].summary = summarize(run_trial(params, seed, options), params, k, seed);
    } catch (const DivergenceError& e) {
      slots[k].failure = TrialFailure{k, seed, e.step(), e.what()};
    }
  });

  TrialBatch batch;
  for (Slot& s : slots) {
    if (s.summary) batch.trials.push_back(*s.summary);
    if (s.failure) batch.failures.push_back(*s.failure);
  }
  return batch;
}

std::uint64_t sweep_batch_seed(std::uint64_t base_seed, int n) noexcept {
  return derive_seed(base_seed, static_cast<std::uint64_t>(n));
}

SampleStats sample_stats(std::span<const double> values) {
  SampleStats s;
  if (values.empty()) return s;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = std::clamp(sum / static_cast<double>(values.size()), s.min, s.max);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

SweepTable sweep_school_size(const SimParams& base_params, std::span<const int> n_values,
                             std::span<const Strategy> strategies, std::size_t n_trials,
                             std::uint64_t base_seed, unsigned jobs) {
  SweepTable table;
  for (int n : n_values) {
    if (n < 1) throw ValidationError("school sizes must be at least 1");
    for (Strategy strategy : strategies) {
      SimParams params = base_params;
      params.n_prey = n;
      params.strategy = strategy;
      validate_params(params);
      const TrialBatch batch = run_trials(params, n_trials, sweep_batch_seed(base_seed, n), jobs);

      std::vector<double> p, t_alive, eaten;
      for (const TrialSummary& s : batch.trials) {
        p.push_back(s.p_eaten);
        t_alive.push_back(s.t_alive);
        eaten.push_back(s.n_eaten);
      }
      SweepRow row;
      row.n = n;
      row.strategy = strategy;
      row.trials = batch.trials.size();
      row.failures = batch.failures.size();
      const SampleStats ps = sample_stats(p);
      row.p_eaten_mean = ps.mean;
      row.p_eaten_std = ps.std;
      row.p_eaten_min = ps.min;
      row.p_eaten_max = ps.max;
      row.p_eaten_q25 = quantile(p, 0.25);
      row.p_eaten_q50 = quantile(p, 0.50);
      row.p_eaten_q75 = quantile(p, 0.75);
      const SampleStats ts = sample_stats(t_alive);
      row.t_alive_mean = ts.mean;
      row.t_alive_std = ts.std;
      row.n_eaten_mean = sample_stats(eaten).mean;
      table.rows.push_back(row);
      table.failures.insert(table.failures.end(), batch.failures.begin(), batch.failures.end());
    }
  }
  return table;
}

}  // namespace predswarm
