// Horizontal ordering of the layers of one slice: pairwise layer similarity
// scores and a minimum-weight Hamiltonian path through them.

#pragma once

#include <stdexcept>
#include <vector>

#include <boost/rational.hpp>

#include "storyweave/core.hpp"

namespace storyweave {

using Rational = boost::rational<long>;

/// The interactions of a layer as character sets (each sorted).
using LayerPartition = std::vector<std::vector<CharacterId>>;

LayerPartition partition_of(const StorylineInstance& inst,
                            const std::vector<InteractionId>& interactions);

/// Pair counts over characters that occur in both layers:
/// n1 together in both, n2 apart in both, n3 apart then together,
/// n4 together then apart.
struct RandCounts {
  long n1 = 0, n2 = 0, n3 = 0, n4 = 0;

  long total() const { return n1 + n2 + n3 + n4; }
};

RandCounts rand_counts(const LayerPartition& a, const LayerPartition& b);

/// (n1 + n2) / total, or 1 when no character occurs in both layers.
Rational rand_index(const LayerPartition& a, const LayerPartition& b);

/// Number of character quadruples {a,b,c,d} with a,b and c,d in two
/// different interactions of the first layer while a,c and b,d sit in two
/// different interactions of the second. Each such quadruple forces a
/// crossing when the layers are adjacent.
long pattern_count(const LayerPartition& a, const LayerPartition& b);

enum class Heuristic { Rand, Pattern };

/// Edge weight between two layers: 1 - rand_index, or pattern_count.
Rational layer_weight(const LayerPartition& a, const LayerPartition& b,
                      Heuristic heuristic);

struct SliceGraph {
  TimestampId timestamp;
  std::vector<LayerPartition> layers;
  std::vector<std::vector<Rational>> weights;  // symmetric, zero diagonal
};

SliceGraph build_slice_graph(TimestampId timestamp, std::vector<LayerPartition> layers,
                             Heuristic heuristic);

class SliceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PathOrder {
  std::vector<int> path;
  Rational cost;
};

inline constexpr int kMaxExactPathNodes = 18;

/// Minimum-weight Hamiltonian path by dynamic programming over subsets; the
/// lexicographically smallest optimal path is returned. Throws SliceTooLarge
/// above kMaxExactPathNodes nodes.
PathOrder min_path_order(const SliceGraph& g);

/// Same, on a bare weight matrix.
PathOrder min_path_order(const std::vector<std::vector<Rational>>& weights);

}  // namespace storyweave
