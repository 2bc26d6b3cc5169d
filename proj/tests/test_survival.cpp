#include <doctest.h>

#include "predswarm/noise.hpp"
#include "predswarm/survival.hpp"

using namespace predswarm;

namespace {

TrialRecord record_from(int n, std::vector<int> survived) {
  TrialRecord rec;
  rec.n_initial = n;
  rec.t_max = static_cast<long>(survived.size()) - 1;
  rec.steps_run = rec.t_max;
  std::size_t id = 0;
  for (std::size_t t = 1; t < survived.size(); ++t)
    for (int k = 0; k < survived[t - 1] - survived[t]; ++k) rec.eaten_times[id++] = static_cast<long>(t);
  rec.n_survived = std::move(survived);
  return rec;
}

// Random nonincreasing survivor series.
TrialRecord random_record(NoiseSource& src) {
  const int n = 1 + static_cast<int>(src.uniform() * 200);
  const long t_max = 1 + static_cast<long>(src.uniform() * 3000);
  std::vector<int> survived(t_max + 1);
  int alive = n;
  survived[0] = n;
  for (long t = 1; t <= t_max; ++t) {
    if (alive > 0 && src.uniform() < 0.02) alive -= 1 + static_cast<int>(src.uniform() * std::min(alive, 3));
    alive = std::max(alive, 0);
    survived[t] = alive;
  }
  return record_from(n, std::move(survived));
}

}  // namespace

TEST_CASE("p_eaten_series with nobody eaten is all zero") {
  const auto p = p_eaten_series(record_from(5, {5, 5, 5, 5}));
  CHECK(p == std::vector<double>{0, 0, 0, 0});
}

TEST_CASE("p_eaten_series worked example") {
  const auto p = p_eaten_series(record_from(10, {10, 10, 8, 8}));
  CHECK(p == std::vector<double>{0, 0, 0.2, 0.2});
}

TEST_CASE("p_eaten_series reaches one when everyone is eaten") {
  const auto p = p_eaten_series(record_from(7, {7, 4, 1, 0, 0}));
  CHECK(p[3] == 1.0);
  CHECK(p.back() == 1.0);
}

TEST_CASE("p_eaten_series telescopes to (N - N_survived) / N") {
  NoiseSource src(2718);
  for (int trial = 0; trial < 50; ++trial) {
    const TrialRecord rec = random_record(src);
    const auto p = p_eaten_series(rec);
    for (std::size_t t = 0; t < p.size(); ++t)
      CHECK(p[t] == static_cast<double>(rec.n_initial - rec.n_survived[t]) / rec.n_initial);
  }
}

TEST_CASE("average_living_time") {
  CHECK(average_living_time(record_from(4, {4, 4, 4})) == 2.0);

  std::vector<int> s(3001, 2);
  for (std::size_t t = 100; t < s.size(); ++t) s[t] = 1;
  CHECK(average_living_time(record_from(2, s)) == 1550.0);

  CHECK(average_living_time(record_from(3, {3, 0, 0, 0})) == 1.0);
}

TEST_CASE("check_record rejects broken records") {
  TrialRecord rec = record_from(3, {3, 2, 2});
  CHECK_NOTHROW(check_record(rec));

  TrialRecord rising = rec;
  rising.n_survived = {3, 2, 3};
  CHECK_THROWS_AS(check_record(rising), std::invalid_argument);

  TrialRecord short_series = rec;
  short_series.n_survived.pop_back();
  CHECK_THROWS_AS(check_record(short_series), std::invalid_argument);

  TrialRecord no_times = rec;
  no_times.eaten_times.clear();
  CHECK_THROWS_AS(p_eaten_series(no_times), std::invalid_argument);
}
