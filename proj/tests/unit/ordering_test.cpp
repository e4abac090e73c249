#include <random>

#include <gtest/gtest.h>

#include "storyweave/ordering.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

namespace storyweave {
namespace {

LayerPartition parts(std::vector<std::vector<int>> groups) {
  LayerPartition p;
  for (const auto& g : groups) {
    std::vector<CharacterId> ids;
    for (int c : g) ids.emplace_back(c);
    p.push_back(ids);
  }
  return p;
}

// a=0, b=1, c=2, d=3
const LayerPartition kAbCd = parts({{0, 1}, {2, 3}});
const LayerPartition kAcBd = parts({{0, 2}, {1, 3}});

TEST(RandIndex, WorkedPair) {
  const auto counts = rand_counts(kAbCd, kAcBd);
  EXPECT_EQ(counts.n1, 0);
  EXPECT_EQ(counts.n2, 2);
  EXPECT_EQ(counts.n3, 2);
  EXPECT_EQ(counts.n4, 2);
  EXPECT_EQ(rand_index(kAbCd, kAcBd), Rational(1, 3));
}

TEST(RandIndex, IdenticalLayers) {
  EXPECT_EQ(rand_index(kAbCd, kAbCd), Rational(1));
  EXPECT_EQ(rand_index(parts({{0, 1}}), parts({{0, 1}})), Rational(1));
}

TEST(RandIndex, DisjointLayersScoreOne) {
  EXPECT_EQ(rand_index(parts({{0, 1}}), parts({{2, 3}})), Rational(1));
  EXPECT_EQ(rand_counts(parts({{0, 1}}), parts({{2, 3}})).total(), 0);
}

TEST(RandIndex, OnlySharedCharactersCount) {
  // e only lives in the first layer and is ignored.
  EXPECT_EQ(rand_index(parts({{0, 1, 4}, {2, 3}}), kAcBd), Rational(1, 3));
}

TEST(RandIndex, MatchesOracleAndIsSymmetric) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 400; ++round) {
    const auto a = testing::random_partition(rng, 7);
    const auto b = testing::random_partition(rng, 7);
    const Rational r = rand_index(a, b);
    EXPECT_EQ(r, testing::brute_rand_index(a, b));
    EXPECT_EQ(r, rand_index(b, a));
    EXPECT_GE(r, Rational(0));
    EXPECT_LE(r, Rational(1));
  }
}

TEST(PatternCount, WorkedPair) { EXPECT_EQ(pattern_count(kAbCd, kAcBd), 1); }

TEST(PatternCount, SameLayerHasNoPattern) {
  EXPECT_EQ(pattern_count(kAbCd, kAbCd), 0);
  EXPECT_EQ(pattern_count(parts({{0, 1}}), parts({{0, 1}})), 0);
}

TEST(PatternCount, MatchesQuadrupleOracle) {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 300; ++round) {
    const auto a = testing::random_partition(rng, 8);
    const auto b = testing::random_partition(rng, 8);
    const long n = pattern_count(a, b);
    EXPECT_EQ(n, testing::brute_pattern_count(a, b));
    EXPECT_EQ(n, pattern_count(b, a));
    if (a == b) EXPECT_EQ(n, 0);
  }
}

TEST(PatternCount, BoundedByPairsSquared) {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 200; ++round) {
    const auto a = testing::random_partition(rng, 8);
    const auto b = testing::random_partition(rng, 8);
    long shared = 0;
    for (const auto& g : a) {
      for (CharacterId c : g) shared += testing::group_of(b, c) >= 0;
    }
    const long pairs = shared * (shared - 1) / 2;
    EXPECT_LE(pattern_count(a, b), pairs * pairs);
  }
}

TEST(SliceGraph, Weights) {
  const auto same = build_slice_graph(TimestampId(0), {kAbCd, kAbCd}, Heuristic::Rand);
  EXPECT_EQ(same.weights[0][1], Rational(0));
  const auto pattern = build_slice_graph(TimestampId(0), {kAbCd, kAcBd}, Heuristic::Pattern);
  EXPECT_EQ(pattern.weights[0][1], Rational(1));
  EXPECT_EQ(pattern.weights[1][0], Rational(1));
  const auto rand = build_slice_graph(TimestampId(0), {kAbCd, kAcBd}, Heuristic::Rand);
  EXPECT_EQ(rand.weights[0][1], Rational(2, 3));
  const auto one = build_slice_graph(TimestampId(0), {kAbCd}, Heuristic::Rand);
  EXPECT_EQ(one.weights.size(), 1u);
}

TEST(MinPathOrder, ThreeNodes) {
  std::vector<std::vector<Rational>> w{{0, 5, 1}, {5, 0, 1}, {1, 1, 0}};
  const auto p = min_path_order(w);
  EXPECT_EQ(p.cost, Rational(2));
  EXPECT_EQ(p.path, (std::vector<int>{0, 2, 1}));
}

TEST(MinPathOrder, TrivialSizes) {
  EXPECT_EQ(min_path_order({{Rational(0)}}).path, std::vector<int>{0});
  std::vector<std::vector<Rational>> two{{0, Rational(3, 2)}, {Rational(3, 2), 0}};
  const auto p = min_path_order(two);
  EXPECT_EQ(p.path, (std::vector<int>{0, 1}));
  EXPECT_EQ(p.cost, Rational(3, 2));
}

TEST(MinPathOrder, MatchesPermutationOracle) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 120; ++round) {
    const int n = std::uniform_int_distribution<int>(1, 7)(rng);
    const auto w = testing::random_weights(rng, n);
    const auto p = min_path_order(w);
    EXPECT_EQ(p.cost, testing::brute_path_cost(w));
    ASSERT_EQ(static_cast<int>(p.path.size()), n);
    Rational recomputed(0);
    for (int i = 1; i < n; ++i) recomputed += w[p.path[i - 1]][p.path[i]];
    EXPECT_EQ(recomputed, p.cost);
    // The reversed path costs the same and is never lexicographically smaller.
    std::vector<int> rev(p.path.rbegin(), p.path.rend());
    EXPECT_LE(p.path, rev);
  }
}

TEST(MinPathOrder, TooLarge) {
  std::vector<std::vector<Rational>> w(kMaxExactPathNodes + 1,
                                       std::vector<Rational>(kMaxExactPathNodes + 1, Rational(1)));
  EXPECT_THROW(min_path_order(w), SliceTooLarge);
}

TEST(PartitionOf, SortedCharacterSets) {
  const auto inst = testing::make_instance({{{"b", "a"}, "t"}, {{"c"}, "t"}});
  const auto p = partition_of(inst, {InteractionId(0), InteractionId(1)});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_TRUE(std::is_sorted(p[0].begin(), p[0].end()));
  EXPECT_EQ(p[1].size(), 1u);
}

}  // namespace
}  // namespace storyweave
