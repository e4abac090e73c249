#include "commands.hpp"

#include <cstdlib>
#include <optional>
#include <ostream>

#include <fmt/format.h>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "bench.hpp"
#include "files.hpp"
#include "storyweave/coloring.hpp"
#include "storyweave/render.hpp"

namespace storyweave::cli {

namespace {

bool uses_layer_budget(Algorithm a) {
  return a != Algorithm::Ilp1 && a != Algorithm::Ilp2;
}

std::optional<ModelKind> exact_kind(Algorithm a) {
  switch (a) {
    case Algorithm::Ilp1:
      return kIlp1;
    case Algorithm::Ilp1ML:
      return kIlp1ML;
    case Algorithm::Ilp2:
      return kIlp2;
    case Algorithm::Ilp2ML:
      return kIlp2ML;
    default:
      return std::nullopt;
  }
}

struct StatsArgs {
  std::string input;
  std::optional<int> cap;
};

struct SolveArgs {
  std::string input;
  std::string algorithm;
  double timeout = 3600;
  std::uint64_t seed = 0;
  std::optional<int> cap;
  std::string export_lp;
  std::string output;
};

struct RenderArgs {
  std::string storyline;
  std::string instance;
  std::string output;
};

struct BenchArgs {
  std::string manifest;
  std::string output;
  std::optional<double> timeout;
  std::optional<int> jobs;
};

int cmd_stats(const StatsArgs& a, std::ostream& out) {
  const auto inst = load_instance(a.input);
  const auto budget = layer_budget(inst, true, a.cap);
  long layers = 0;
  for (int b : budget) layers += b;
  out << "interactions,characters,timestamps,coloring_layers\n";
  out << fmt::format("{},{},{},{}\n", inst.num_interactions(), inst.num_characters(),
                     inst.num_timestamps(), layers);
  return 0;
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const Algorithm algorithm = parse_algorithm(a.algorithm);
  if (a.cap && !uses_layer_budget(algorithm)) {
    err << "--cap only applies to ps, pp, ilp1ml and ilp2ml\n";
    return 1;
  }
  if (a.timeout <= 0) {
    err << "--timeout must be positive\n";
    return 1;
  }
  const auto inst = load_instance(a.input);

  if (!a.export_lp.empty()) {
    const auto kind = exact_kind(algorithm);
    if (!kind) {
      err << "--export-lp needs one of ilp1, ilp1ml, ilp2, ilp2ml\n";
      return 1;
    }
    ModelOptions options;
    options.symmetry_breaking = false;
    const auto model =
        build_model(inst, *kind, layer_budget(inst, kind->minimize_layers, a.cap), options);
    write_file(a.export_lp, bip::export_lp(model.program));
    out << fmt::format("wrote {} ({} variables, {} constraints)\n", a.export_lp,
                       model.program.num_variables(), model.program.constraints().size());
    return 0;
  }
  if (a.output.empty()) {
    err << "an output path (-o) is required unless --export-lp is given\n";
    return 1;
  }

  PipelineConfig cfg;
  cfg.timeout_seconds = a.timeout;
  cfg.seed = a.seed;
  cfg.cap = a.cap;
  const std::string dataset = std::filesystem::path(a.input).stem().string();
  CombinatorialStoryline storyline;
  const BenchRow row = run_cell(dataset, inst, algorithm, cfg, &storyline);
  out << csv_header() << "\n" << csv_line(row) << "\n";
  if (!row.error.empty()) {
    err << row.error << "\n";
    return 1;
  }
  if (storyline.layers.empty()) {
    err << "no storyline found (" << row.status << ")\n";
    return 1;
  }
  write_file(a.output, dump(storyline_to_json(inst, storyline)));
  return 0;
}

int cmd_render(const RenderArgs& a, std::ostream& out) {
  const auto inst = load_instance(a.instance);
  const auto storyline = load_storyline(inst, a.storyline);
  auto geometry = pad_short_curves(assign_coordinates(inst, storyline));
  write_file(a.output, emit_svg(geometry, inst));
  out << fmt::format("wrote {} ({} layers, wiggle {:.1f})\n", a.output,
                     storyline.layers.size(), total_wiggle(geometry));
  return 0;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  Manifest manifest = load_manifest(a.manifest);
  if (a.timeout) {
    if (*a.timeout <= 0) throw InputError("--timeout must be positive");
    manifest.timeout_seconds = *a.timeout;
  }
  if (a.jobs) manifest.jobs = std::max(1, *a.jobs);
  const auto rows = run_bench(manifest);
  std::string csv = csv_header() + "\n";
  int failed = 0;
  for (const auto& row : rows) {
    csv += csv_line(row) + "\n";
    if (row.status == "error") ++failed;
  }
  write_file(a.output, csv);
  out << fmt::format("wrote {} rows to {}", rows.size(), a.output);
  if (failed > 0) out << fmt::format(", {} failed", failed);
  out << "\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Crossing-minimized storyline layouts"};
  app.name("storyweave");
  app.require_subcommand(1);

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Instance statistics and coloring layer count");
  stats_cmd->add_option("input", stats.input, "Instance file")->required();
  stats_cmd->add_option("--cap", stats.cap, "Maximum interactions per layer")
      ->check(CLI::PositiveNumber);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Compute a storyline with one algorithm");
  solve_cmd->add_option("input", solve.input, "Instance file")->required();
  solve_cmd->add_option("-a,--algorithm", solve.algorithm, "ps, pp, ilp1, ilp1ml, ilp2 or ilp2ml")
      ->required()
      ->check(CLI::IsMember({"ps", "pp", "ilp1", "ilp1ml", "ilp2", "ilp2ml"}));
  solve_cmd->add_option("--timeout", solve.timeout, "Seconds")->capture_default_str();
  solve_cmd->add_option("--seed", solve.seed, "Solver tie-breaking seed")->capture_default_str();
  solve_cmd->add_option("--cap", solve.cap, "Maximum interactions per layer")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--export-lp", solve.export_lp, "Write the LP model instead of solving");
  solve_cmd->add_option("-o,--output", solve.output, "Storyline file to write");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Draw a storyline as SVG");
  render_cmd->add_option("storyline", render.storyline, "Storyline file")->required();
  render_cmd->add_option("instance", render.instance, "Instance file")->required();
  render_cmd->add_option("-o,--output", render.output, "SVG file to write")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark manifest to CSV");
  bench_cmd->add_option("manifest", bench.manifest, "Manifest file")->required();
  bench_cmd->add_option("-o,--output", bench.output, "CSV file to write")->required();
  bench_cmd->add_option("--timeout", bench.timeout, "Override the manifest timeout");
  bench_cmd->add_option("-j,--jobs", bench.jobs, "Override the manifest worker count");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (stats_cmd->parsed()) return cmd_stats(stats, out);
    if (solve_cmd->parsed()) return cmd_solve(solve, out, err);
    if (render_cmd->parsed()) return cmd_render(render, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("storyweave");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("STORYWEAVE_LOG")) spdlog::cfg::helpers::load_levels(env);
}

}  // namespace storyweave::cli
