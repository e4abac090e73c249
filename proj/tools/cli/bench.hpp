// Benchmark harness: runs algorithms over instance files and reports one CSV
// row per (dataset, algorithm) cell.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "storyweave/pipeline.hpp"

namespace storyweave::cli {

struct BenchRow {
  std::string dataset;
  std::string algorithm;
  int interactions = 0;
  int characters = 0;
  int timestamps = 0;
  std::optional<int> layers;      // absent when no storyline was produced
  std::optional<long> crossings;
  double runtime_seconds = 0;
  std::string status;             // solver status, or "error"
  std::optional<double> gap_percent;  // feasible-timeout only
  std::string error;
};

std::string csv_header();
std::string csv_line(const BenchRow& row);

/// Runs one algorithm and fills a row. Never throws: failures, including an
/// output that does not validate, end up in `error` with status "error".
BenchRow run_cell(const std::string& dataset, const StorylineInstance& inst,
                  Algorithm algorithm, const PipelineConfig& cfg,
                  CombinatorialStoryline* storyline_out = nullptr);

struct ManifestEntry {
  std::string name;
  std::filesystem::path path;
};

/// A JSON document:
///   {"instances": ["a.json", {"name": "b", "path": "b.json"}],
///    "algorithms": ["ps", "ilp2"], "timeout": 60, "seed": 0, "cap": 2, "jobs": 2}
/// Everything except "instances" is optional. Relative paths are resolved
/// against the manifest's directory.
struct Manifest {
  std::vector<ManifestEntry> instances;
  std::vector<Algorithm> algorithms;
  double timeout_seconds = 3600;
  std::uint64_t seed = 0;
  std::optional<int> cap;
  int jobs = 1;
};

Manifest load_manifest(const std::filesystem::path& path);

/// Every instance against every algorithm on `jobs` worker threads. Rows come
/// back sorted by (dataset, algorithm).
std::vector<BenchRow> run_bench(const Manifest& manifest);

}  // namespace storyweave::cli
