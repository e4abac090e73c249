#include "storyweave/coloring.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "storyweave/bip.hpp"

namespace storyweave {

namespace {

bool intersects(const std::vector<CharacterId>& a, const std::vector<CharacterId>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

}  // namespace

ConflictGraph build_conflict_graph(const StorylineInstance& inst, TimestampId t) {
  ConflictGraph g;
  g.timestamp = t;
  g.nodes = inst.interactions_at(t);
  for (std::size_t a = 0; a < g.nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < g.nodes.size(); ++b) {
      if (intersects(inst.interaction(g.nodes[a]).characters,
                     inst.interaction(g.nodes[b]).characters)) {
        g.edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
      }
    }
  }
  return g;
}

std::vector<std::vector<int>> Coloring::classes() const {
  std::vector<std::vector<int>> out(num_colors);
  for (std::size_t v = 0; v < color.size(); ++v) out[color[v]].push_back(static_cast<int>(v));
  return out;
}

Coloring min_coloring(const ConflictGraph& g, std::optional<int> cap) {
  if (cap && *cap < 1) throw std::invalid_argument("color class cap must be >= 1");
  const int n = static_cast<int>(g.size());
  Coloring out;
  if (n == 0) return out;

  // x[v][c]: node v takes color c. Node v only uses colors 0..v, and color c
  // is opened (u[c]) only after color c-1; every coloring can be relabeled
  // into this form by first use.
  bip::BinaryProgram p;
  std::vector<bip::VarId> used(n);
  for (int c = 0; c < n; ++c) {
    used[c] = p.add_variable(fmt::format("u_{}", c));
    p.add_objective(1, used[c]);
  }
  std::vector<std::vector<bip::VarId>> x(n);
  for (int v = 0; v < n; ++v) {
    std::vector<bip::Term> one;
    for (int c = 0; c <= v; ++c) {
      x[v].push_back(p.add_variable(fmt::format("x_{}_{}", v, c)));
      one.push_back({1, x[v][c]});
      p.add_constraint({{1, x[v][c]}, {-1, used[c]}}, bip::Relation::LessEqual, 0);
    }
    p.add_constraint(std::move(one), bip::Relation::Equal, 1);
  }
  for (int c = 1; c < n; ++c) {
    p.add_constraint({{1, used[c]}, {-1, used[c - 1]}}, bip::Relation::LessEqual, 0);
  }
  for (auto [a, b] : g.edges) {
    for (int c = 0; c <= std::min(a, b); ++c) {
      p.add_constraint({{1, x[a][c]}, {1, x[b][c]}}, bip::Relation::LessEqual, 1);
    }
  }
  if (cap) {
    for (int c = 0; c < n; ++c) {
      std::vector<bip::Term> members;
      for (int v = c; v < n; ++v) members.push_back({1, x[v][c]});
      if (static_cast<int>(members.size()) > *cap) {
        p.add_constraint(std::move(members), bip::Relation::LessEqual, *cap);
      }
    }
  }

  bip::SolveOptions options;
  options.timeout_seconds = 1e9;
  const auto result = bip::solve(p, options);
  if (result.status != bip::SolveStatus::Optimal) {
    throw std::logic_error("coloring program has no optimal solution");
  }
  const auto& assignment = *result.assignment;

  out.color.assign(n, -1);
  std::vector<int> relabel(n, -1);
  for (int v = 0; v < n; ++v) {
    int c = 0;
    while (c <= v && !assignment[x[v][c].index]) ++c;
    if (c > v) throw std::logic_error("coloring solution leaves a node uncolored");
    if (relabel[c] < 0) relabel[c] = out.num_colors++;
    out.color[v] = relabel[c];
  }
  return out;
}

LayerBudget layer_budget(const StorylineInstance& inst, bool minimize,
                         std::optional<int> cap) {
  LayerBudget budget = interaction_count_budget(inst);
  if (!minimize) return budget;
  for (std::size_t t = 0; t < inst.num_timestamps(); ++t) {
    const auto g = build_conflict_graph(inst, TimestampId(static_cast<int>(t)));
    budget[t] = min_coloring(g, cap).num_colors;
  }
  return budget;
}

}  // namespace storyweave
