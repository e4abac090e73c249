// Per-timestamp conflict graphs and exact minimum colorings. Color classes
// are sets of interactions that can share a layer.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "storyweave/core.hpp"

namespace storyweave {

struct ConflictGraph {
  TimestampId timestamp;
  std::vector<InteractionId> nodes;
  /// Pairs of positions into `nodes`, first < second, sorted.
  std::vector<std::pair<int, int>> edges;

  std::size_t size() const { return nodes.size(); }
};

/// Interactions at `t`, joined when they share a character.
ConflictGraph build_conflict_graph(const StorylineInstance& inst, TimestampId t);

struct Coloring {
  std::vector<int> color;  // per position in ConflictGraph::nodes
  int num_colors = 0;

  /// Node positions per color class, each in ascending order.
  std::vector<std::vector<int>> classes() const;
};

/// Minimum proper coloring, optionally with at most `cap` nodes per color.
/// Colors are numbered by first use in node order, so node 0 gets color 0.
/// Throws std::invalid_argument when cap < 1.
Coloring min_coloring(const ConflictGraph& g, std::optional<int> cap = std::nullopt);

/// Per-timestamp layer counts: interactions at t, or the capped chromatic
/// number of its conflict graph when `minimize` is set.
LayerBudget layer_budget(const StorylineInstance& inst, bool minimize,
                         std::optional<int> cap = std::nullopt);

}  // namespace storyweave
