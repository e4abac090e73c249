#include "storyweave/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

#include "storyweave/coloring.hpp"

namespace storyweave {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Solved {
  CombinatorialStoryline storyline;
  bip::SolveResult result;
};

Solved solve_and_decode(const StorylineInstance& inst, const Model& model, double timeout,
                        std::uint64_t seed) {
  bip::SolveOptions options;
  options.timeout_seconds = timeout;
  options.seed = seed;
  Solved out;
  out.result = bip::solve(model.program, options);
  if (out.result.assignment) out.storyline = decode(inst, model, out.result);
  return out;
}

void fill_solver_fields(LayoutReport& report, const bip::SolveResult& result) {
  report.status = result.status;
  report.upper_bound = result.objective_value;
  report.lower_bound = result.best_lower_bound;
  if (result.status == bip::SolveStatus::FeasibleTimeout) {
    report.gap = result.gap().value_or(0.0);
  }
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Ps:
      return "ps";
    case Algorithm::Pp:
      return "pp";
    case Algorithm::Ilp1:
      return "ilp1";
    case Algorithm::Ilp1ML:
      return "ilp1ml";
    case Algorithm::Ilp2:
      return "ilp2";
    case Algorithm::Ilp2ML:
      return "ilp2ml";
  }
  return "unknown";
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all{Algorithm::Ps,     Algorithm::Pp,
                                          Algorithm::Ilp1,   Algorithm::Ilp1ML,
                                          Algorithm::Ilp2,   Algorithm::Ilp2ML};
  return all;
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : all_algorithms()) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm \"" + std::string(name) + "\"");
}

std::vector<bool> orient_slice_paths(const std::vector<std::vector<LayerPartition>>& slices,
                                     Heuristic heuristic, bool exhaustive) {
  const std::size_t k = slices.size();
  std::vector<bool> reversed(k, false);
  auto first = [&](std::size_t i, bool rev) -> const LayerPartition& {
    return rev ? slices[i].back() : slices[i].front();
  };
  auto last = [&](std::size_t i, bool rev) -> const LayerPartition& {
    return rev ? slices[i].front() : slices[i].back();
  };

  if (exhaustive) {
    if (k > 20) throw std::invalid_argument("too many slices for exhaustive orientation");
    Rational best(-1);
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      Rational cost(0);
      for (std::size_t i = 1; i < k; ++i) {
        cost += layer_weight(last(i - 1, mask >> (i - 1) & 1u), first(i, mask >> i & 1u),
                             heuristic);
      }
      if (best < 0 || cost < best) {
        best = cost;
        for (std::size_t i = 0; i < k; ++i) reversed[i] = mask >> i & 1u;
      }
    }
    return reversed;
  }

  for (std::size_t i = 1; i < k; ++i) {
    const auto& prev = last(i - 1, reversed[i - 1]);
    const Rational keep = layer_weight(prev, first(i, false), heuristic);
    const Rational flip = layer_weight(prev, first(i, true), heuristic);
    reversed[i] = flip < keep;
  }
  return reversed;
}

namespace {

std::vector<std::vector<InteractionId>> plan_layers(const StorylineInstance& inst,
                                                    const PipelineConfig& cfg,
                                                    StageTimes& times) {
  const auto t0 = Clock::now();
  std::vector<std::vector<std::vector<InteractionId>>> slices;
  for (std::size_t t = 0; t < inst.num_timestamps(); ++t) {
    const TimestampId tid(static_cast<int>(t));
    const auto g = build_conflict_graph(inst, tid);
    if (g.size() == 0) continue;
    const auto coloring = min_coloring(g, cfg.cap);
    std::vector<std::vector<InteractionId>> layers;
    for (const auto& cls : coloring.classes()) {
      std::vector<InteractionId> ids;
      for (int v : cls) ids.push_back(g.nodes[v]);
      layers.push_back(std::move(ids));
    }
    slices.push_back(std::move(layers));
  }
  times.coloring = seconds_since(t0);

  const auto t1 = Clock::now();
  std::vector<std::vector<LayerPartition>> partitions;
  for (auto& layers : slices) {
    std::vector<LayerPartition> parts;
    for (const auto& ids : layers) parts.push_back(partition_of(inst, ids));
    const auto graph = build_slice_graph(inst.interaction(layers.front().front()).time,
                                         parts, cfg.heuristic);
    const auto path = min_path_order(graph);
    std::vector<std::vector<InteractionId>> ordered;
    std::vector<LayerPartition> ordered_parts;
    for (int i : path.path) {
      ordered.push_back(layers[i]);
      ordered_parts.push_back(parts[i]);
    }
    layers = std::move(ordered);
    partitions.push_back(std::move(ordered_parts));
  }

  const auto reversed = orient_slice_paths(partitions, cfg.heuristic, cfg.exhaustive_orientation);
  std::vector<std::vector<InteractionId>> out;
  for (std::size_t i = 0; i < slices.size(); ++i) {
    if (reversed[i]) std::reverse(slices[i].begin(), slices[i].end());
    for (auto& layer : slices[i]) out.push_back(std::move(layer));
  }
  times.ordering = seconds_since(t1);
  return out;
}

}  // namespace

std::vector<std::vector<InteractionId>> pipeline_layers(const StorylineInstance& inst,
                                                        const PipelineConfig& cfg) {
  StageTimes ignored;
  return plan_layers(inst, cfg, ignored);
}

LayoutResult run_pipeline(const StorylineInstance& inst, const PipelineConfig& cfg) {
  if (cfg.timeout_seconds <= 0) throw std::invalid_argument("timeout must be positive");
  const auto start = Clock::now();
  LayoutResult out;
  out.report.algorithm = cfg.heuristic == Heuristic::Rand ? "ps" : "pp";
  const auto layers = plan_layers(inst, cfg, out.report.stages);

  const auto t2 = Clock::now();
  const Model model = build_fixed_model(inst, layers);
  const double remaining = std::max(1.0, cfg.timeout_seconds - seconds_since(start));
  auto solved = solve_and_decode(inst, model, remaining, cfg.seed);
  out.report.stages.crossing = seconds_since(t2);

  fill_solver_fields(out.report, solved.result);
  out.storyline = std::move(solved.storyline);
  out.report.layers = static_cast<int>(out.storyline.layers.size());
  out.report.crossings = count_crossings(out.storyline).total;
  out.report.runtime_seconds = seconds_since(start);
  return out;
}

LayoutResult run_exact(const StorylineInstance& inst, ModelKind kind,
                       const PipelineConfig& cfg) {
  if (cfg.timeout_seconds <= 0) throw std::invalid_argument("timeout must be positive");
  const auto start = Clock::now();
  LayoutResult out;
  out.report.algorithm = std::string(to_string(kind));

  const auto budget = layer_budget(inst, kind.minimize_layers, cfg.cap);
  out.report.stages.coloring = seconds_since(start);
  const Model model = build_model(inst, kind, budget);
  const double remaining = std::max(1.0, cfg.timeout_seconds - seconds_since(start));
  const auto t1 = Clock::now();
  auto solved = solve_and_decode(inst, model, remaining, cfg.seed);
  out.report.stages.crossing = seconds_since(t1);

  fill_solver_fields(out.report, solved.result);
  out.storyline = std::move(solved.storyline);
  out.report.layers = static_cast<int>(out.storyline.layers.size());
  out.report.crossings = count_crossings(out.storyline).total;
  out.report.runtime_seconds = seconds_since(start);
  return out;
}

LayoutResult run_algorithm(const StorylineInstance& inst, Algorithm algorithm,
                           PipelineConfig cfg) {
  switch (algorithm) {
    case Algorithm::Ps:
      cfg.heuristic = Heuristic::Rand;
      return run_pipeline(inst, cfg);
    case Algorithm::Pp:
      cfg.heuristic = Heuristic::Pattern;
      return run_pipeline(inst, cfg);
    case Algorithm::Ilp1:
      return run_exact(inst, kIlp1, cfg);
    case Algorithm::Ilp1ML:
      return run_exact(inst, kIlp1ML, cfg);
    case Algorithm::Ilp2:
      return run_exact(inst, kIlp2, cfg);
    case Algorithm::Ilp2ML:
      return run_exact(inst, kIlp2ML, cfg);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace storyweave
