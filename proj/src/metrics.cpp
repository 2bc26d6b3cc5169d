#include "predswarm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace predswarm {

namespace {

void require_alive(const SwarmState& state) {
  if (state.n_alive() == 0) throw std::invalid_argument("school metric needs at least one alive prey");
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

std::pair<Vector, Vector> school_center(const SwarmState& state) {
  require_alive(state);
  const int d = state.dims();
  Vector xc(d, 0.0), vc(d, 0.0);
  std::size_t n = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (!state.alive[i]) continue;
    ++n;
    for (int k = 0; k < d; ++k) {
      xc[k] += state.positions(i, k);
      vc[k] += state.velocities(i, k);
    }
  }
  for (int k = 0; k < d; ++k) {
    xc[k] /= static_cast<double>(n);
    vc[k] /= static_cast<double>(n);
  }
  return {xc, vc};
}

double school_diameter(const SwarmState& state) {
  const auto [xc, vc] = school_center(state);
  double best = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (!state.alive[i]) continue;
    double d2 = 0.0;
    for (int k = 0; k < state.dims(); ++k) {
      const double diff = state.positions(i, k) - xc[k];
      d2 += diff * diff;
    }
    best = std::max(best, d2);
  }
  return std::sqrt(best);
}

double velocity_std(const SwarmState& state) {
  const auto [xc, vc] = school_center(state);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (!state.alive[i]) continue;
    ++n;
    for (int k = 0; k < state.dims(); ++k) {
      const double diff = state.velocities(i, k) - vc[k];
      sum += diff * diff;
    }
  }
  return std::sqrt(sum / static_cast<double>(n));
}

int count_subgroups(const SwarmState& state, double link_dist) {
  if (!(link_dist > 0.0)) throw std::invalid_argument("link_dist must be positive");
  const auto rows = state.alive_indices();
  const std::size_t m = rows.size();
  DisjointSets sets(m);
  int groups = static_cast<int>(m);
  const double link2 = link_dist * link_dist;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      double d2 = 0.0;
      for (int k = 0; k < state.dims(); ++k) {
        const double diff = state.positions(rows[a], k) - state.positions(rows[b], k);
        d2 += diff * diff;
      }
      if (d2 <= link2 && sets.unite(a, b)) --groups;
    }
  }
  return groups;
}

std::string_view to_string(PatternLabel label) {
  switch (label) {
    case PatternLabel::SplitReunion: return "SplitReunion";
    case PatternLabel::SplitTwoGroups: return "SplitTwoGroups";
    case PatternLabel::Scattered: return "Scattered";
    case PatternLabel::MaintainFormation: return "MaintainFormation";
    case PatternLabel::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

std::optional<Pattern> to_pattern(PatternLabel label) {
  switch (label) {
    case PatternLabel::SplitReunion: return Pattern::SplitReunion;
    case PatternLabel::SplitTwoGroups: return Pattern::SplitTwoGroups;
    case PatternLabel::Scattered: return Pattern::Scattered;
    case PatternLabel::MaintainFormation: return Pattern::MaintainFormation;
    case PatternLabel::Unclassified: return std::nullopt;
  }
  return std::nullopt;
}

PatternLabel classify_pattern(std::span<const double> diameter, std::span<const double> /*velocity_std*/,
                              std::span<const int> groups, const SimParams& params) {
  if (diameter.empty() || groups.empty()) return PatternLabel::Unclassified;
  const double d0 = diameter.front();
  const double d_end = diameter.back();
  const int g_end = groups.back();

  if (d_end > params.scatter_ratio * d0 && g_end > 2) return PatternLabel::Scattered;

  bool split_mid = false;
  for (std::size_t i = 1; i + 1 < groups.size(); ++i) split_mid = split_mid || groups[i] >= 2;
  if (split_mid && g_end == 1 && d_end < params.reunion_ratio * d0) return PatternLabel::SplitReunion;

  if (g_end == 2) return PatternLabel::SplitTwoGroups;

  const bool always_one = std::all_of(groups.begin(), groups.end(), [](int g) { return g == 1; });
  if (always_one && std::abs(d_end - d0) <= params.maintain_tol * d0)
    return PatternLabel::MaintainFormation;

  return PatternLabel::Unclassified;
}

}  // namespace predswarm
