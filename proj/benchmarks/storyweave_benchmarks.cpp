#include <algorithm>
#include <random>

#include <benchmark/benchmark.h>

#include "storyweave/coloring.hpp"
#include "storyweave/formulations.hpp"
#include "storyweave/ordering.hpp"
#include "storyweave/pipeline.hpp"
#include "storyweave/render.hpp"

namespace sw = storyweave;

namespace {

// Same shape as the test generator: n characters, m interactions of up to
// three characters each, spread over p timestamps.
sw::StorylineInstance synthetic(std::uint64_t seed, int n, int m, int p) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  sw::RawInstance raw;
  for (int t = 0; t < p; ++t) raw.timestamps.push_back("t" + std::to_string(t));
  std::vector<bool> used(n, false);
  for (int j = 0; j < m; ++j) {
    sw::RawInteraction ri;
    ri.time = raw.timestamps[uniform(0, p - 1)];
    std::vector<int> pool(n);
    for (int c = 0; c < n; ++c) pool[c] = c;
    std::shuffle(pool.begin(), pool.end(), rng);
    const int size = uniform(1, std::min(n, 3));
    for (int k = 0; k < size; ++k) {
      ri.characters.push_back("c" + std::to_string(pool[k]));
      used[pool[k]] = true;
    }
    raw.interactions.push_back(std::move(ri));
  }
  for (int c = 0; c < n; ++c) {
    if (used[c]) raw.characters.push_back("c" + std::to_string(c));
  }
  return sw::validate_instance(raw);
}

void BM_SolveIlp1(benchmark::State& state) {
  const auto inst = synthetic(1, 5, static_cast<int>(state.range(0)), 3);
  const auto model = sw::build_model(inst, sw::kIlp1, sw::layer_budget(inst, false));
  for (auto _ : state) benchmark::DoNotOptimize(sw::bip::solve(model.program));
  state.counters["vars"] = static_cast<double>(model.program.num_variables());
}
BENCHMARK(BM_SolveIlp1)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MinColoring(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  sw::ConflictGraph g;
  for (int v = 0; v < n; ++v) g.nodes.emplace_back(v);
  std::bernoulli_distribution edge(0.4);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (edge(rng)) g.edges.emplace_back(u, v);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(sw::min_coloring(g));
}
BENCHMARK(BM_MinColoring)->Arg(8)->Arg(16)->Arg(24);

void BM_MinPathOrder(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> w(0, 20);
  std::vector<std::vector<sw::Rational>> weights(n, std::vector<sw::Rational>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) weights[i][j] = weights[j][i] = sw::Rational(w(rng), 20);
  }
  for (auto _ : state) benchmark::DoNotOptimize(sw::min_path_order(weights));
}
BENCHMARK(BM_MinPathOrder)->Arg(8)->Arg(12)->Arg(16);

void BM_Pipeline(benchmark::State& state) {
  const auto inst = synthetic(4, 6, static_cast<int>(state.range(0)), 4);
  sw::PipelineConfig cfg;
  cfg.timeout_seconds = 10;
  for (auto _ : state) benchmark::DoNotOptimize(sw::run_pipeline(inst, cfg));
}
BENCHMARK(BM_Pipeline)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Render(benchmark::State& state) {
  const auto inst = synthetic(5, 8, static_cast<int>(state.range(0)), 6);
  const auto s = sw::run_pipeline(inst, {}).storyline;
  for (auto _ : state) {
    const auto g = sw::pad_short_curves(sw::assign_coordinates(inst, s));
    benchmark::DoNotOptimize(sw::emit_svg(g, inst));
  }
}
BENCHMARK(BM_Render)->Arg(8)->Arg(14)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
