#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "storyweave/pipeline.hpp"
#include "storyweave/render.hpp"
#include "support/geometry_checks.hpp"
#include "support/random_instances.hpp"

namespace storyweave {
namespace {

using testing::make_instance;

CombinatorialStoryline layout(const StorylineInstance& inst) {
  return run_algorithm(inst, Algorithm::Ps, {}).storyline;
}

long count_of(const std::string& text, const std::string& needle) {
  long n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

TEST(AssignCoordinates, SingleCharacterIsStraight) {
  const auto inst = make_instance({{{"a"}, "t0"}, {{"a"}, "t1"}, {{"a"}, "t2"}});
  const auto g = assign_coordinates(inst, layout(inst));
  ASSERT_EQ(g.curves.size(), 1u);
  EXPECT_EQ(g.curves[0].y.size(), 3u);
  EXPECT_EQ(total_wiggle(g), 0);
  EXPECT_EQ(g.separators.size(), 2u);
}

TEST(AssignCoordinates, ParallelCharactersStayFlat) {
  const auto inst = make_instance({{{"a", "b"}, "t0"}, {{"a"}, "t1"}, {{"b"}, "t1"}, {{"a", "b"}, "t2"}});
  const auto g = assign_coordinates(inst, layout(inst));
  EXPECT_EQ(total_wiggle(g), 0);
  for (const auto& curve : g.curves) {
    for (double v : curve.y) EXPECT_DOUBLE_EQ(v, curve.y.front());
  }
}

TEST(AssignCoordinates, LayerXSpacing) {
  const auto inst = make_instance({{{"a"}, "t0"}, {{"b"}, "t0"}, {{"a", "b"}, "t0"}, {{"a"}, "t1"}});
  const auto s = layout(inst);
  RenderConfig cfg;
  const auto g = assign_coordinates(inst, s, cfg);
  ASSERT_EQ(g.layer_x.size(), s.layers.size());
  for (std::size_t l = 1; l < g.layer_x.size(); ++l) {
    const double step = g.layer_x[l] - g.layer_x[l - 1];
    const bool boundary = s.layers[l].time != s.layers[l - 1].time;
    EXPECT_DOUBLE_EQ(step, cfg.x_step + (boundary ? cfg.slice_gap : 0));
  }
}

TEST(AssignCoordinates, FidelityOnRandomInstances) {
  std::mt19937_64 rng(103);
  for (int round = 0; round < 60; ++round) {
    const auto inst = testing::random_instance(rng, {7, 9, 4, 4});
    const auto s = layout(inst);
    const auto g = assign_coordinates(inst, s);
    for (std::size_t l = 0; l < s.layers.size(); ++l) {
      EXPECT_EQ(testing::order_from_y(g, static_cast<int>(l)), s.layers[l].order);
    }
    EXPECT_EQ(testing::geometric_crossings(g), count_crossings(s).total);
    EXPECT_EQ(testing::gap_violation(inst, s, g), "");
  }
}

TEST(AssignCoordinates, SweepsNeverAddWiggle) {
  std::mt19937_64 rng(107);
  RenderConfig frozen;
  frozen.max_sweeps = 0;
  for (int round = 0; round < 60; ++round) {
    const auto inst = testing::random_instance(rng, {6, 8, 3, 4});
    const auto s = layout(inst);
    EXPECT_LE(total_wiggle(assign_coordinates(inst, s)),
              total_wiggle(assign_coordinates(inst, s, frozen)) + 1e-9);
  }
}

TEST(AssignCoordinates, BarsSpanInteractionMembers) {
  const auto inst = make_instance({{{"a", "b", "c"}, "t0"}, {{"d"}, "t0"}});
  const auto s = layout(inst);
  RenderConfig cfg;
  const auto g = assign_coordinates(inst, s, cfg);
  ASSERT_EQ(g.bars.size(), 2u);
  for (const auto& bar : g.bars) {
    const auto size = inst.interaction(bar.interaction).characters.size();
    EXPECT_GE(bar.bottom - bar.top, static_cast<double>(size - 1) * cfg.within_gap);
  }
}

TEST(PadShortCurves, WidensSingleLayerCurves) {
  const auto inst = make_instance({{{"a", "b"}, "t0"}, {{"a"}, "t1"}});
  RenderConfig cfg;
  const auto g = pad_short_curves(assign_coordinates(inst, layout(inst), cfg), cfg);
  const auto& b = g.curves[inst.find_character("b")->value];
  EXPECT_GE(b.end_x - b.start_x, 2 * cfg.short_curve_pad);
  const auto& a = g.curves[inst.find_character("a")->value];
  EXPECT_DOUBLE_EQ(a.start_x, g.layer_x[0]);
  EXPECT_DOUBLE_EQ(a.end_x, g.layer_x[1]);
}

TEST(PadShortCurves, StopsAtSeparators) {
  const auto inst = make_instance({{{"a"}, "t0"}, {{"b"}, "t1"}, {{"c"}, "t2"}});
  RenderConfig cfg;
  cfg.x_step = 10;
  cfg.slice_gap = 0;
  const auto g = pad_short_curves(assign_coordinates(inst, layout(inst), cfg), cfg);
  ASSERT_EQ(g.separators.size(), 2u);
  const auto& middle = g.curves[inst.find_character("b")->value];
  EXPECT_DOUBLE_EQ(middle.start_x, g.separators[0]);
  EXPECT_DOUBLE_EQ(middle.end_x, g.separators[1]);
  const auto& first = g.curves[inst.find_character("a")->value];
  EXPECT_DOUBLE_EQ(first.start_x, g.layer_x[0] - cfg.short_curve_pad);
  EXPECT_DOUBLE_EQ(first.end_x, g.separators[0]);
}

TEST(EmitSvg, OnePathPerCharacterOneRectPerInteraction) {
  const auto single = make_instance({{{"a"}, "t0"}});
  const auto svg1 = emit_svg(assign_coordinates(single, layout(single)), single);
  EXPECT_EQ(count_of(svg1, "<path"), 1);
  EXPECT_EQ(count_of(svg1, "<rect"), 1);

  std::mt19937_64 rng(109);
  for (int round = 0; round < 20; ++round) {
    const auto inst = testing::random_instance(rng, {6, 8, 3, 3});
    const auto svg = emit_svg(pad_short_curves(assign_coordinates(inst, layout(inst))), inst);
    EXPECT_EQ(count_of(svg, "<path"), static_cast<long>(inst.num_characters()));
    EXPECT_EQ(count_of(svg, "<rect"), static_cast<long>(inst.num_interactions()));
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
  }
}

TEST(EmitSvg, EscapesNames) {
  const auto inst = make_instance({{{"<Tom & Jerry>"}, "t0"}});
  const auto svg = emit_svg(assign_coordinates(inst, layout(inst)), inst);
  EXPECT_NE(svg.find("&lt;Tom &amp; Jerry&gt;"), std::string::npos);
  EXPECT_EQ(svg.find("<Tom"), std::string::npos);
}

TEST(EmitSvg, GoldenThreeCharacters) {
  const auto inst = make_instance({{{"alice", "bob"}, "day1"},
                                   {{"carol"}, "day1"},
                                   {{"alice", "carol"}, "day2"},
                                   {{"bob"}, "day2"},
                                   {{"alice", "bob", "carol"}, "day3"}});
  const auto svg = emit_svg(pad_short_curves(assign_coordinates(inst, layout(inst))), inst);
  const auto path = std::string(STORYWEAVE_TEST_DATA_DIR) + "/golden/three_characters.svg";
  if (std::getenv("STORYWEAVE_UPDATE_GOLDEN")) std::ofstream(path, std::ios::binary) << svg;
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in) << "missing golden file " << path;
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), svg);
}

}  // namespace
}  // namespace storyweave
