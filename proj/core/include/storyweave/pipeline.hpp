// End-to-end layout algorithms: the coloring / path-ordering / fixed-layer
// heuristic pipelines and the exact models, all reporting the same figures.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "storyweave/bip.hpp"
#include "storyweave/core.hpp"
#include "storyweave/formulations.hpp"
#include "storyweave/ordering.hpp"

namespace storyweave {

enum class Algorithm { Ps, Pp, Ilp1, Ilp1ML, Ilp2, Ilp2ML };

std::string_view to_string(Algorithm algorithm);
/// "ps", "pp", "ilp1", "ilp1ml", "ilp2", "ilp2ml"; throws
/// std::invalid_argument otherwise.
Algorithm parse_algorithm(std::string_view name);
const std::vector<Algorithm>& all_algorithms();

struct PipelineConfig {
  Heuristic heuristic = Heuristic::Rand;
  std::optional<int> cap;
  double timeout_seconds = 3600;
  std::uint64_t seed = 0;
  /// Try every orientation combination of the slice paths instead of greedy
  /// boundary stitching. Only for a handful of slices.
  bool exhaustive_orientation = false;
};

struct StageTimes {
  double coloring = 0;
  double ordering = 0;
  double crossing = 0;
};

struct LayoutReport {
  std::string algorithm;
  int layers = 0;
  long crossings = 0;  // oracle recount of the returned storyline
  double runtime_seconds = 0;
  bip::SolveStatus status = bip::SolveStatus::Infeasible;
  long upper_bound = 0;  // solver objective of the incumbent
  long lower_bound = 0;
  std::optional<double> gap;  // only for feasible-timeout
  StageTimes stages;
};

struct LayoutResult {
  CombinatorialStoryline storyline;
  LayoutReport report;
};

/// Greedy orientation of consecutive slice paths: each slice after the first
/// is reversed when that makes its first layer cheaper against the previous
/// slice's last layer. Returns one reversal flag per slice.
std::vector<bool> orient_slice_paths(const std::vector<std::vector<LayerPartition>>& slices,
                                     Heuristic heuristic, bool exhaustive = false);

/// Coloring, then per-slice path ordering, then exact crossing minimization
/// on the fixed layer sequence. Throws SliceTooLarge from the ordering stage.
LayoutResult run_pipeline(const StorylineInstance& inst, const PipelineConfig& cfg);

/// Layer lists chosen by the first two pipeline stages, left to right.
std::vector<std::vector<InteractionId>> pipeline_layers(const StorylineInstance& inst,
                                                        const PipelineConfig& cfg);

/// Solves one exact model to optimality or timeout. `cap` only affects the
/// layer budget of the ML variants.
LayoutResult run_exact(const StorylineInstance& inst, ModelKind kind,
                       const PipelineConfig& cfg);

LayoutResult run_algorithm(const StorylineInstance& inst, Algorithm algorithm,
                           PipelineConfig cfg);

}  // namespace storyweave
