#include "predswarm/survival.hpp"

#include <stdexcept>

namespace predswarm {

void check_record(const TrialRecord& rec) {
  if (rec.n_initial < 1) throw std::invalid_argument("record needs at least one prey");
  if (rec.n_survived.size() != static_cast<std::size_t>(rec.t_max) + 1)
    throw std::invalid_argument("survivor series must cover steps 0..t_max");
  if (rec.n_survived.front() != rec.n_initial)
    throw std::invalid_argument("survivor series must start at N");
  for (std::size_t t = 1; t < rec.n_survived.size(); ++t)
    if (rec.n_survived[t] > rec.n_survived[t - 1] || rec.n_survived[t] < 0)
      throw std::invalid_argument("survivor series must be nonincreasing and nonnegative");
  if (static_cast<int>(rec.eaten_times.size()) != rec.n_eaten())
    throw std::invalid_argument("eaten times disagree with the survivor series");
}

std::vector<double> p_eaten_series(const TrialRecord& rec) {
  check_record(rec);
  // The recursion is carried on the integer numerator so every entry is a
  // single correctly rounded quotient.
  const double n = rec.n_initial;
  std::vector<double> p(rec.n_survived.size(), 0.0);
  long eaten = 0;
  for (std::size_t t = 1; t < p.size(); ++t) {
    eaten += rec.n_survived[t - 1] - rec.n_survived[t];
    p[t] = static_cast<double>(eaten) / n;
  }
  return p;
}

double average_living_time(const TrialRecord& rec) {
  check_record(rec);
  if (rec.eaten_times.empty()) return static_cast<double>(rec.t_max);
  double total = 0.0;
  for (const auto& [id, step] : rec.eaten_times) total += static_cast<double>(step);
  const int survivors = rec.n_initial - static_cast<int>(rec.eaten_times.size());
  total += static_cast<double>(survivors) * static_cast<double>(rec.t_max);
  return total / rec.n_initial;
}

}  // namespace predswarm
