// Acceptance suite: one line per criterion, exit code 1 if any blocking
// criterion fails. Criterion 10 needs external datasets (STORYWEAVE_DATASETS)
// and never affects the exit code.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"

#include "storyweave/bip.hpp"
#include "storyweave/coloring.hpp"
#include "storyweave/formulations.hpp"
#include "storyweave/ordering.hpp"
#include "storyweave/pipeline.hpp"
#include "storyweave/render.hpp"
#include "support/geometry_checks.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

namespace sw = storyweave;
namespace fs = std::filesystem;
using sw::testing::random_instance;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict = Verdict::Pass;
  std::string detail;
};

// Collects the first few failures of a criterion.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) first_ += (first_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {Verdict::Pass, summary + ", " + std::to_string(checks_) + " checks"};
    return {Verdict::Fail, std::to_string(failures_) + "/" + std::to_string(checks_) +
                               " checks failed: " + first_};
  }

 private:
  long checks_ = 0, failures_ = 0;
  std::string first_;
};

std::vector<sw::StorylineInstance> corpus(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<sw::StorylineInstance> out;
  for (int i = 0; i < count; ++i) out.push_back(random_instance(rng));
  return out;
}

struct Exact {
  sw::bip::SolveStatus status;
  long crossings = -1;
};

Exact solve_exact(const sw::StorylineInstance& inst, sw::ModelKind kind, const sw::LayerBudget& budget) {
  const auto model = sw::build_model(inst, kind, budget);
  const auto r = sw::bip::solve(model.program);
  Exact out{r.status};
  if (r.assignment) {
    const auto s = sw::decode(inst, model, r);
    if (sw::validate_storyline(inst, s).empty()) out.crossings = sw::count_crossings(s).total;
  }
  return out;
}

Exact solve_exact(const sw::StorylineInstance& inst, sw::ModelKind kind) {
  return solve_exact(inst, kind, sw::layer_budget(inst, kind.minimize_layers));
}

sw::ActivityMode mode_of(sw::ModelKind kind) {
  return kind.family == sw::ModelFamily::Ilp2 ? sw::ActivityMode::Interval : sw::ActivityMode::Span;
}

const sw::ModelKind kKinds[] = {sw::kIlp1, sw::kIlp1ML, sw::kIlp2, sw::kIlp2ML};

Outcome oracle_equivalence() {
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  int index = 0;
  for (const auto& inst : corpus(1, 200)) {
    const auto budget = sw::layer_budget(inst, false);
    const auto ilp = solve_exact(inst, sw::kIlp1, budget);
    const long brute = sw::brute_force_optimum(inst, sw::ActivityMode::Span, {budget});
    t.check(ilp.status == sw::bip::SolveStatus::Optimal && ilp.crossings == brute,
            "instance " + std::to_string(index) + ": ilp1 " + std::to_string(ilp.crossings) +
                " vs brute force " + std::to_string(brute));
    ++index;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  t.check(seconds < 300, "runtime " + std::to_string(seconds) + " s");
  std::ostringstream s;
  s.precision(2);
  s << std::fixed << "200 instances in " << seconds << " s";
  return t.outcome(s.str());
}

Outcome dominance() {
  Tally t;
  int index = 0;
  for (const auto& inst : corpus(1, 200)) {
    long opt[4];
    for (int k = 0; k < 4; ++k) {
      const auto r = solve_exact(inst, kKinds[k]);
      t.check(r.status == sw::bip::SolveStatus::Optimal && r.crossings >= 0,
              "instance " + std::to_string(index) + " " + std::string(to_string(kKinds[k])) +
                  " not solved");
      opt[k] = r.crossings;
    }
    const auto tag = "instance " + std::to_string(index) + ": ";
    t.check(opt[2] <= opt[0], tag + "ilp2 > ilp1");
    t.check(opt[0] <= opt[1], tag + "ilp1 > ilp1ml");
    t.check(opt[2] <= opt[3], tag + "ilp2 > ilp2ml");
    ++index;
  }
  return t.outcome("200 instances");
}

sw::LayerPartition groups(std::vector<std::vector<int>> raw) {
  sw::LayerPartition p;
  for (const auto& g : raw) {
    std::vector<sw::CharacterId> ids;
    for (int c : g) ids.emplace_back(c);
    p.push_back(ids);
  }
  return p;
}

Outcome unavoidable_pattern() {
  Tally t;
  const auto inst = sw::testing::make_instance(
      {{{"a", "b"}, "t0"}, {{"c", "d"}, "t0"}, {{"a", "c"}, "t0"}, {{"b", "d"}, "t0"}});
  const sw::LayerBudget two{2};
  for (sw::ModelKind kind : kKinds) {
    const auto budget = kind.minimize_layers ? sw::layer_budget(inst, true, 2) : two;
    t.check(budget == two, std::string(to_string(kind)) + " budget is not two layers");
    const auto r = solve_exact(inst, kind, budget);
    t.check(r.status == sw::bip::SolveStatus::Optimal && r.crossings >= 1,
            std::string(to_string(kind)) + " optimum " + std::to_string(r.crossings));
    t.check(sw::brute_force_optimum(inst, mode_of(kind), {two}) >= 1,
            std::string(to_string(kind)) + " brute force below 1");
  }
  const auto first = sw::partition_of(inst, {sw::InteractionId(0), sw::InteractionId(1)});
  const auto second = sw::partition_of(inst, {sw::InteractionId(2), sw::InteractionId(3)});
  t.check(sw::pattern_count(first, second) == 1, "pattern_count != 1");
  t.check(sw::pattern_count(second, first) == 1, "reversed pattern_count != 1");
  return t.outcome("every exact algorithm crosses at least once, one pattern");
}

Outcome rand_index() {
  Tally t;
  const auto ab_cd = groups({{0, 1}, {2, 3}});
  const auto ac_bd = groups({{0, 2}, {1, 3}});
  t.check(sw::rand_index(ab_cd, ac_bd) == sw::Rational(1, 3), "worked pair is not 1/3");
  t.check(sw::rand_index(ab_cd, ab_cd) == sw::Rational(1), "identical layers are not 1");
  std::mt19937_64 rng(4);
  for (int round = 0; round < 1000; ++round) {
    const auto a = sw::testing::random_partition(rng, 7);
    const auto b = sw::testing::random_partition(rng, 7);
    const auto ab = sw::rand_index(a, b);
    t.check(ab == sw::rand_index(b, a), "asymmetric pair " + std::to_string(round));
    t.check(ab == sw::testing::brute_rand_index(a, b), "oracle mismatch " + std::to_string(round));
  }
  return t.outcome("1/3, 1, 1000 symmetric pairs");
}

Outcome coloring() {
  Tally t;
  std::mt19937_64 rng(5);
  for (int round = 0; round < 500; ++round) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const double density = std::uniform_real_distribution<double>(0, 1)(rng);
    sw::ConflictGraph g;
    for (int v = 0; v < n; ++v) g.nodes.emplace_back(v);
    g.edges = sw::testing::random_edges(rng, n, density);
    const auto tag = "graph " + std::to_string(round);
    t.check(sw::min_coloring(g).num_colors == sw::testing::brute_chromatic_number(n, g.edges),
            tag + " chromatic number");
    t.check(sw::min_coloring(g, 1).num_colors == n, tag + " cap=1");
  }
  std::mt19937_64 irng(55);
  for (int round = 0; round < 200; ++round) {
    const auto inst = random_instance(irng, {6, 10, 3, 4});
    long total = 0;
    for (int b : sw::layer_budget(inst, true)) total += b;
    t.check(total <= static_cast<long>(inst.num_interactions()),
            "instance " + std::to_string(round) + " budget above |I|");
  }
  return t.outcome("500 graphs, 200 budgets");
}

Outcome path_tsp() {
  Tally t;
  std::mt19937_64 rng(6);
  for (int round = 0; round < 200; ++round) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const auto w = sw::testing::random_weights(rng, n);
    const auto order = sw::min_path_order(w);
    sw::Rational walked = 0;
    for (std::size_t k = 1; k < order.path.size(); ++k) walked += w[order.path[k - 1]][order.path[k]];
    t.check(order.cost == sw::testing::brute_path_cost(w) && walked == order.cost &&
                static_cast<int>(order.path.size()) == n,
            "matrix " + std::to_string(round));
  }
  return t.outcome("200 matrices");
}

Outcome pipeline() {
  Tally t;
  int index = 0;
  for (const auto& inst : corpus(7, 200)) {
    const auto exact = solve_exact(inst, sw::kIlp1ML);
    const auto tag = "instance " + std::to_string(index);
    t.check(exact.status == sw::bip::SolveStatus::Optimal, tag + " ilp1ml not solved");
    for (sw::Algorithm a : {sw::Algorithm::Ps, sw::Algorithm::Pp}) {
      const auto r = sw::run_algorithm(inst, a, {});
      t.check(sw::validate_storyline(inst, r.storyline).empty(),
              tag + " " + std::string(to_string(a)) + " illegal");
      t.check(r.report.crossings >= exact.crossings,
              tag + " " + std::string(to_string(a)) + " beats ilp1ml");
    }
    ++index;
  }
  return t.outcome("200 instances");
}

// Weighted cover of overlapping triples.
sw::bip::BinaryProgram cover_program(int n, int shift) {
  sw::bip::BinaryProgram p;
  std::vector<sw::bip::VarId> x;
  for (int j = 0; j < n; ++j) x.push_back(p.add_variable("x" + std::to_string(j)));
  for (int j = 0; j < n; ++j) {
    p.add_objective(1 + j % 3, x[j]);
    p.add_constraint({{1, x[j]}, {1, x[(j + 1) % n]}, {1, x[(j + shift) % n]}},
                     sw::bip::Relation::GreaterEqual, 1);
  }
  return p;
}

Outcome solver() {
  Tally t;
  std::mt19937_64 rng(8);
  for (int round = 0; round < 300; ++round) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto p = sw::testing::random_program(rng, n);
    const auto r = sw::bip::solve(p);
    const auto expected = sw::testing::brute_bip_optimum(p);
    const auto tag = "program " + std::to_string(round);
    if (!expected) {
      t.check(r.status == sw::bip::SolveStatus::Infeasible, tag + " should be infeasible");
    } else {
      t.check(r.status == sw::bip::SolveStatus::Optimal && r.objective_value == *expected &&
                  p.satisfies(*r.assignment),
              tag + " optimum");
    }
  }
  int timeouts = 0;
  for (int n = 30; n <= 60; n += 5) {
    for (long limit : {50L, 500L, 5000L}) {
      sw::bip::SolveOptions options;
      options.node_limit = limit;
      options.warm_start_nodes = limit / 2;
      const auto r = sw::bip::solve(cover_program(n, 5), options);
      if (r.status != sw::bip::SolveStatus::FeasibleTimeout) continue;
      ++timeouts;
      t.check(r.best_lower_bound <= r.objective_value,
              "cover " + std::to_string(n) + " LB above UB");
      const auto gap = r.gap();
      t.check(gap && *gap >= 0 && *gap <= 1, "cover " + std::to_string(n) + " gap out of range");
    }
  }
  t.check(timeouts > 0, "no timeout was provoked");
  sw::bip::SolveResult table;
  table.assignment = std::vector<bool>{};
  table.objective_value = 44;
  table.best_lower_bound = 0;
  t.check(table.gap() && *table.gap() * 100 == 100, "44/0 gap is not 100%");
  return t.outcome("300 programs, " + std::to_string(timeouts) + " timed-out runs");
}

Outcome render() {
  Tally t;
  std::mt19937_64 rng(9);
  for (int round = 0; round < 100; ++round) {
    const auto inst = random_instance(rng, {7, 8, 3, 4});
    const auto r = sw::run_algorithm(inst, round % 2 ? sw::Algorithm::Ilp2 : sw::Algorithm::Ps, {});
    const auto g = sw::assign_coordinates(inst, r.storyline);
    const auto tag = "instance " + std::to_string(round);
    t.check(sw::testing::geometric_crossings(g) == sw::testing::pairwise_crossings(r.storyline),
            tag + " inversions differ from the crossing count");
    const auto gap = sw::testing::gap_violation(inst, r.storyline, g);
    t.check(gap.empty(), tag + " " + gap);
  }
  return t.outcome("100 instances");
}

// Statistics of the reconstructed datasets.
struct DatasetRow {
  const char* name;
  int interactions, characters, timestamps, coloring;
  long ilp1, ilp1ml, ilp2, ilp2ml;  // -1 where the reference run timed out
};

const DatasetRow kDatasets[] = {
    {"gdea10", 41, 9, 16, 35, 7, 7, 6, 6},        {"gdea20", 100, 19, 17, 47, -1, -1, -1, -1},
    {"ubiq1", 41, 5, 19, 41, 10, 10, 8, 8},       {"ubiq2", 45, 5, 18, 38, 15, 15, 14, 15},
    {"anna1", 58, 41, 34, 53, 23, 23, 16, 16},    {"jean1", 95, 40, 65, 88, -1, -1, -1, -1},
    {"huck", 107, 74, 43, 81, -1, -1, -1, -1},
};

sw::StorylineInstance load_dataset(const fs::path& path) {
  std::ifstream in(path);
  const auto doc = nlohmann::json::parse(in);
  sw::RawInstance raw;
  raw.characters = doc.at("characters").get<std::vector<std::string>>();
  raw.timestamps = doc.at("timestamps").get<std::vector<std::string>>();
  for (const auto& i : doc.at("interactions")) {
    raw.interactions.push_back(
        {i.at("characters").get<std::vector<std::string>>(), i.at("time").get<std::string>()});
  }
  return sw::validate_instance(raw);
}

Outcome datasets() {
  const char* dir = std::getenv("STORYWEAVE_DATASETS");
  if (!dir) return {Verdict::Skip, "STORYWEAVE_DATASETS not set"};
  double timeout = 60;
  if (const char* s = std::getenv("STORYWEAVE_DATASET_TIMEOUT")) timeout = std::atof(s);
  Tally t;
  int found = 0, compared = 0;
  for (const auto& row : kDatasets) {
    const auto path = fs::path(dir) / (std::string(row.name) + ".json");
    if (!fs::exists(path)) continue;
    ++found;
    sw::StorylineInstance inst;
    try {
      inst = load_dataset(path);
    } catch (const std::exception& e) {
      t.check(false, std::string(row.name) + ": " + e.what());
      continue;
    }
    t.check(static_cast<int>(inst.num_interactions()) == row.interactions &&
                static_cast<int>(inst.num_characters()) == row.characters &&
                static_cast<int>(inst.num_timestamps()) == row.timestamps,
            std::string(row.name) + " statistics");
    long layers = 0;
    for (int b : sw::layer_budget(inst, true)) layers += b;
    t.check(layers == row.coloring, std::string(row.name) + " coloring " + std::to_string(layers));
    const long expected[] = {row.ilp1, row.ilp1ml, row.ilp2, row.ilp2ml};
    sw::PipelineConfig cfg;
    cfg.timeout_seconds = timeout;
    for (int k = 0; k < 4; ++k) {
      if (expected[k] < 0) continue;
      const auto r = sw::run_exact(inst, kKinds[k], cfg);
      if (r.report.status != sw::bip::SolveStatus::Optimal) continue;
      ++compared;
      t.check(r.report.crossings == expected[k],
              std::string(row.name) + " " + std::string(to_string(kKinds[k])) + " " +
                  std::to_string(r.report.crossings));
    }
  }
  if (found == 0) return {Verdict::Skip, std::string("no dataset files in ") + dir};
  return t.outcome(std::to_string(found) + " datasets, " + std::to_string(compared) +
                   " crossing values compared");
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    std::function<Outcome()> run;
    bool blocking;
  };
  const Criterion criteria[] = {
      {1, "oracle equivalence", oracle_equivalence, true},
      {2, "formulation dominance", dominance, true},
      {3, "unavoidable crossing pattern", unavoidable_pattern, true},
      {4, "rand index", rand_index, true},
      {5, "coloring exactness", coloring, true},
      {6, "path order exactness", path_tsp, true},
      {7, "pipeline legality", pipeline, true},
      {8, "solver contract", solver, true},
      {9, "render fidelity", render, true},
      {10, "external datasets (non-blocking)", datasets, false},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char* label = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    std::cout << "[" << label << "] " << c.number << " " << c.title << ": " << o.detail << std::endl;
    if (c.blocking && o.verdict == Verdict::Fail) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
