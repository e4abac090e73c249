// Checks on rendered geometry, re-derived from y coordinates only.

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "storyweave/render.hpp"

namespace storyweave::testing {

/// Character order of a layer read back from the y coordinates.
inline std::vector<CharacterId> order_from_y(const GeometricStoryline& g, int layer) {
  std::vector<std::pair<double, int>> ys;
  for (const auto& curve : g.curves) {
    if (auto y = g.y_at(curve.character, layer)) ys.emplace_back(*y, curve.character.value);
  }
  std::sort(ys.begin(), ys.end());
  std::vector<CharacterId> out;
  for (auto [y, c] : ys) out.emplace_back(c);
  return out;
}

/// Pairs co-present in consecutive layers whose y order flips.
inline long geometric_crossings(const GeometricStoryline& g) {
  long total = 0;
  for (std::size_t l = 0; l + 1 < g.layer_x.size(); ++l) {
    for (std::size_t i = 0; i < g.curves.size(); ++i) {
      for (std::size_t j = i + 1; j < g.curves.size(); ++j) {
        const auto ci = g.curves[i].character, cj = g.curves[j].character;
        const auto a0 = g.y_at(ci, static_cast<int>(l)), b0 = g.y_at(cj, static_cast<int>(l));
        const auto a1 = g.y_at(ci, static_cast<int>(l + 1)), b1 = g.y_at(cj, static_cast<int>(l + 1));
        if (a0 && b0 && a1 && b1 && ((*a0 < *b0) != (*a1 < *b1))) ++total;
      }
    }
  }
  return total;
}

/// Empty when every adjacent pair keeps its required distance; otherwise a
/// description of the first violation.
inline std::string gap_violation(const StorylineInstance& inst, const CombinatorialStoryline& s,
                                 const GeometricStoryline& g, const RenderConfig& cfg = {}) {
  for (std::size_t l = 0; l < s.layers.size(); ++l) {
    const auto& order = s.layers[l].order;
    const auto gaps = required_gaps(inst, s, static_cast<int>(l), cfg);
    for (std::size_t k = 1; k < order.size(); ++k) {
      const double d = *g.y_at(order[k], static_cast<int>(l)) - *g.y_at(order[k - 1], static_cast<int>(l));
      // Members of one interaction need the smaller gap, everyone else the larger.
      bool same = false;
      for (InteractionId id : s.layers[l].interactions) {
        const auto& cs = inst.interaction(id).characters;
        same |= std::binary_search(cs.begin(), cs.end(), order[k]) &&
                std::binary_search(cs.begin(), cs.end(), order[k - 1]);
      }
      const double need = same ? cfg.within_gap : cfg.between_gap;
      if (gaps[k - 1] != need || d < need - 1e-6) {
        return "layer " + std::to_string(l) + " position " + std::to_string(k) + ": gap " +
               std::to_string(d) + " < " + std::to_string(need);
      }
    }
  }
  return {};
}

}  // namespace storyweave::testing
