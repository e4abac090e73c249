#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <tuple>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "files.hpp"

namespace storyweave::cli {

using nlohmann::json;

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

template <class T>
std::string optional_field(const std::optional<T>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

}  // namespace

std::string csv_header() {
  return "dataset,algorithm,interactions,characters,timestamps,layers,crossings,"
         "runtime_s,status,gap_percent,error";
}

std::string csv_line(const BenchRow& row) {
  return fmt::format("{},{},{},{},{},{},{},{:.6f},{},{},{}", quote(row.dataset),
                     quote(row.algorithm), row.interactions, row.characters, row.timestamps,
                     optional_field(row.layers), optional_field(row.crossings),
                     row.runtime_seconds, row.status,
                     row.gap_percent ? fmt::format("{:.1f}", *row.gap_percent) : "",
                     quote(row.error));
}

BenchRow run_cell(const std::string& dataset, const StorylineInstance& inst,
                  Algorithm algorithm, const PipelineConfig& cfg,
                  CombinatorialStoryline* storyline_out) {
  BenchRow row;
  row.dataset = dataset;
  row.algorithm = std::string(to_string(algorithm));
  row.interactions = static_cast<int>(inst.num_interactions());
  row.characters = static_cast<int>(inst.num_characters());
  row.timestamps = static_cast<int>(inst.num_timestamps());
  try {
    spdlog::debug("{}: running {}", dataset, row.algorithm);
    auto result = run_algorithm(inst, algorithm, cfg);
    const auto& report = result.report;
    row.runtime_seconds = report.runtime_seconds;
    row.status = std::string(bip::to_string(report.status));
    if (report.gap) row.gap_percent = *report.gap * 100.0;
    if (!result.storyline.layers.empty()) {
      const auto violations = validate_storyline(inst, result.storyline);
      if (!violations.empty()) {
        row.status = "error";
        row.error = "invalid storyline: " + violations.front().message;
        return row;
      }
      row.layers = report.layers;
      row.crossings = report.crossings;
      if (storyline_out) *storyline_out = std::move(result.storyline);
    }
    spdlog::info("{} {}: {} crossings on {} layers in {:.3f}s ({})", dataset, row.algorithm,
                 report.crossings, report.layers, report.runtime_seconds, row.status);
    spdlog::debug("stage times: coloring {:.3f}s, ordering {:.3f}s, crossing {:.3f}s",
                  report.stages.coloring, report.stages.ordering, report.stages.crossing);
  } catch (const std::exception& e) {
    row.status = "error";
    row.error = e.what();
    spdlog::warn("{} {}: {}", dataset, row.algorithm, e.what());
  }
  return row;
}

Manifest load_manifest(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
  auto fail = [&](const std::string& what) {
    throw InputError(fmt::format("{}: {}", path.string(), what));
  };
  if (!doc.is_object()) fail("expected an object");

  Manifest m;
  const auto base = path.parent_path();
  if (!doc.contains("instances") || !doc["instances"].is_array()) {
    fail("missing \"instances\" list");
  }
  for (const auto& entry : doc["instances"]) {
    ManifestEntry e;
    if (entry.is_string()) {
      e.path = entry.get<std::string>();
    } else if (entry.is_object() && entry.contains("path") && entry["path"].is_string()) {
      e.path = entry["path"].get<std::string>();
      if (entry.contains("name")) e.name = entry["name"].get<std::string>();
    } else {
      fail("each instance is a path or {\"name\", \"path\"}");
    }
    if (e.path.is_relative()) e.path = base / e.path;
    if (e.name.empty()) e.name = e.path.stem().string();
    m.instances.push_back(std::move(e));
  }
  try {
    if (doc.contains("algorithms")) {
      for (const auto& a : doc["algorithms"]) {
        m.algorithms.push_back(parse_algorithm(a.get<std::string>()));
      }
    } else {
      m.algorithms = all_algorithms();
    }
    if (doc.contains("timeout")) m.timeout_seconds = doc["timeout"].get<double>();
    if (doc.contains("seed")) m.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("cap")) m.cap = doc["cap"].get<int>();
    if (doc.contains("jobs")) m.jobs = doc["jobs"].get<int>();
  } catch (const std::exception& e) {
    fail(e.what());
  }
  if (m.timeout_seconds <= 0) fail("timeout must be positive");
  if (m.cap && *m.cap < 1) fail("cap must be at least 1");
  if (m.jobs < 1) fail("jobs must be at least 1");
  return m;
}

std::vector<BenchRow> run_bench(const Manifest& manifest) {
  struct Cell {
    std::size_t instance;
    Algorithm algorithm;
  };
  std::vector<std::optional<StorylineInstance>> instances;
  std::vector<std::string> load_errors;
  for (const auto& entry : manifest.instances) {
    try {
      instances.emplace_back(load_instance(entry.path));
      load_errors.emplace_back();
    } catch (const std::exception& e) {
      instances.emplace_back();
      load_errors.emplace_back(e.what());
    }
  }

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (Algorithm a : manifest.algorithms) cells.push_back({i, a});
  }
  std::vector<BenchRow> rows(cells.size());

  PipelineConfig cfg;
  cfg.timeout_seconds = manifest.timeout_seconds;
  cfg.seed = manifest.seed;
  cfg.cap = manifest.cap;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      const auto& cell = cells[k];
      const auto& name = manifest.instances[cell.instance].name;
      if (!instances[cell.instance]) {
        rows[k].dataset = name;
        rows[k].algorithm = std::string(to_string(cell.algorithm));
        rows[k].status = "error";
        rows[k].error = load_errors[cell.instance];
        continue;
      }
      rows[k] = run_cell(name, *instances[cell.instance], cell.algorithm, cfg);
    }
  };
  const int jobs = static_cast<int>(
      std::min<std::size_t>(manifest.jobs, std::max<std::size_t>(cells.size(), 1)));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.dataset, a.algorithm) < std::tie(b.dataset, b.algorithm);
  });
  return rows;
}

}  // namespace storyweave::cli
