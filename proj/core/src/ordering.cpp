#include "storyweave/ordering.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include <fmt/format.h>

namespace storyweave {

namespace {

// Character -> index of the interaction holding it.
std::map<int, int> group_of(const LayerPartition& layer) {
  std::map<int, int> out;
  for (std::size_t g = 0; g < layer.size(); ++g) {
    for (CharacterId c : layer[g]) out.emplace(c.value, static_cast<int>(g));
  }
  return out;
}

long checked_mul(long a, long b) {
  long r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("path weights exceed exact integer range");
  }
  return r;
}

long checked_add(long a, long b) {
  long r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("path weights exceed exact integer range");
  }
  return r;
}

std::size_t overlap(const std::vector<CharacterId>& a, const std::vector<CharacterId>& b) {
  std::size_t n = 0;
  for (CharacterId c : a) {
    if (std::binary_search(b.begin(), b.end(), c)) ++n;
  }
  return n;
}

}  // namespace

LayerPartition partition_of(const StorylineInstance& inst,
                            const std::vector<InteractionId>& interactions) {
  LayerPartition out;
  for (InteractionId id : interactions) out.push_back(inst.interaction(id).characters);
  return out;
}

RandCounts rand_counts(const LayerPartition& a, const LayerPartition& b) {
  const auto ga = group_of(a);
  const auto gb = group_of(b);
  std::vector<std::pair<int, int>> shared;  // (group in a, group in b)
  for (auto [c, g] : ga) {
    if (auto it = gb.find(c); it != gb.end()) shared.emplace_back(g, it->second);
  }
  RandCounts out;
  for (std::size_t i = 0; i < shared.size(); ++i) {
    for (std::size_t j = i + 1; j < shared.size(); ++j) {
      const bool together_a = shared[i].first == shared[j].first;
      const bool together_b = shared[i].second == shared[j].second;
      if (together_a && together_b) {
        ++out.n1;
      } else if (!together_a && !together_b) {
        ++out.n2;
      } else if (together_b) {
        ++out.n3;
      } else {
        ++out.n4;
      }
    }
  }
  return out;
}

Rational rand_index(const LayerPartition& a, const LayerPartition& b) {
  const auto counts = rand_counts(a, b);
  if (counts.total() == 0) return Rational(1);
  return Rational(counts.n1 + counts.n2, counts.total());
}

long pattern_count(const LayerPartition& a, const LayerPartition& b) {
  // With P, Q in the first layer and R, S in the second, the pattern picks
  // one character from each of P∩R, P∩S, Q∩R, Q∩S.
  long total = 0;
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (std::size_t q = p + 1; q < a.size(); ++q) {
      for (std::size_t r = 0; r < b.size(); ++r) {
        for (std::size_t s = r + 1; s < b.size(); ++s) {
          total += static_cast<long>(overlap(a[p], b[r]) * overlap(a[p], b[s]) *
                                     overlap(a[q], b[r]) * overlap(a[q], b[s]));
        }
      }
    }
  }
  return total;
}

Rational layer_weight(const LayerPartition& a, const LayerPartition& b,
                      Heuristic heuristic) {
  if (heuristic == Heuristic::Pattern) return Rational(pattern_count(a, b));
  return Rational(1) - rand_index(a, b);
}

SliceGraph build_slice_graph(TimestampId timestamp, std::vector<LayerPartition> layers,
                             Heuristic heuristic) {
  SliceGraph g;
  g.timestamp = timestamp;
  const std::size_t k = layers.size();
  g.weights.assign(k, std::vector<Rational>(k, Rational(0)));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      g.weights[i][j] = g.weights[j][i] = layer_weight(layers[i], layers[j], heuristic);
    }
  }
  g.layers = std::move(layers);
  return g;
}

PathOrder min_path_order(const SliceGraph& g) { return min_path_order(g.weights); }

PathOrder min_path_order(const std::vector<std::vector<Rational>>& weights) {
  const int n = static_cast<int>(weights.size());
  if (n == 0) throw std::invalid_argument("path order of an empty slice");
  if (n > kMaxExactPathNodes) {
    throw SliceTooLarge(fmt::format(
        "slice too large for exact path-TSP: {} layers (limit {})", n,
        kMaxExactPathNodes));
  }
  if (n == 1) return {{0}, Rational(0)};

  // Scale to a common denominator so the DP runs on exact integers.
  long denom = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const long d = weights[i][j].denominator();
      denom = checked_mul(denom / std::gcd(denom, d), d);
    }
  }
  std::vector<std::vector<long>> w(n, std::vector<long>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (weights[i][j] < 0) throw std::invalid_argument("negative path weight");
      w[i][j] = checked_mul(weights[i][j].numerator(), denom / weights[i][j].denominator());
    }
  }

  // rest[mask][v]: cheapest way to visit every node outside `mask`, starting
  // at v, where mask holds the nodes already visited (v included).
  constexpr long kInf = std::numeric_limits<long>::max() / 4;
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<long> rest((full + 1) * n, kInf);
  auto at = [&](std::size_t mask, int v) -> long& { return rest[mask * n + v]; };
  for (int v = 0; v < n; ++v) at(full, v) = 0;
  for (std::size_t mask = full; mask-- > 1;) {
    for (int v = 0; v < n; ++v) {
      if (!(mask >> v & 1u)) continue;
      long best = kInf;
      for (int u = 0; u < n; ++u) {
        if (mask >> u & 1u) continue;
        const long tail = at(mask | (std::size_t{1} << u), u);
        if (tail < kInf) best = std::min(best, checked_add(w[v][u], tail));
      }
      at(mask, v) = best;
    }
  }

  long optimum = kInf;
  for (int v = 0; v < n; ++v) optimum = std::min(optimum, at(std::size_t{1} << v, v));

  // Greedy reconstruction picks the smallest index at every step that still
  // completes to an optimal path.
  PathOrder out;
  std::size_t mask = 0;
  long remaining = optimum;
  int current = -1;
  for (int step = 0; step < n; ++step) {
    for (int u = 0; u < n; ++u) {
      if (mask >> u & 1u) continue;
      const std::size_t next = mask | (std::size_t{1} << u);
      const long edge = current < 0 ? 0 : w[current][u];
      if (edge + at(next, u) == remaining) {
        remaining -= edge;
        mask = next;
        current = u;
        out.path.push_back(u);
        break;
      }
    }
  }
  out.cost = Rational(optimum, denom);
  return out;
}

}  // namespace storyweave
