#pragma once

#include <optional>
#include <span>
#include <utility>

#include "predswarm/core.hpp"

namespace predswarm {

/// Mean position and mean velocity of the alive prey.
/// Throws std::invalid_argument when no prey is alive.
std::pair<Vector, Vector> school_center(const SwarmState& state);

/// Largest distance from an alive prey to the school center.
double school_diameter(const SwarmState& state);

/// Root-mean-square deviation of alive prey velocities from the mean velocity.
double velocity_std(const SwarmState& state);

/// Connected components of the graph joining alive prey no farther apart than
/// `link_dist`. Zero when nobody is alive.
int count_subgroups(const SwarmState& state, double link_dist);

enum class PatternLabel { SplitReunion, SplitTwoGroups, Scattered, MaintainFormation, Unclassified };

std::string_view to_string(PatternLabel label);
std::optional<Pattern> to_pattern(PatternLabel label);

/// Rule-based reading of a run's diameter and subgroup series (first entry is
/// the initial frame, last the final one). Rules, first match wins:
///   Scattered          final diameter > scatter_ratio x initial and > 2 groups
///   SplitReunion       >= 2 groups at some interior frame, 1 group at the end,
///                      final diameter < reunion_ratio x initial
///   SplitTwoGroups     exactly 2 groups at the end
///   MaintainFormation  always 1 group, final diameter within maintain_tol
///   Unclassified       otherwise
PatternLabel classify_pattern(std::span<const double> diameter, std::span<const double> velocity_std,
                              std::span<const int> groups, const SimParams& params);

}  // namespace predswarm
