// Geometric realization of a combinatorial storyline and SVG output.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "storyweave/core.hpp"

namespace storyweave {

/// Pixel constants. Nothing here is load-bearing for correctness; all of it
/// can be overridden.
struct RenderConfig {
  double within_gap = 14;   // between characters of one interaction
  double between_gap = 28;  // between any other adjacent characters
  double x_step = 60;       // between consecutive layers
  double slice_gap = 20;    // extra space where the timestamp changes
  double margin_left = 120;
  double margin_right = 60;
  double margin_top = 30;
  double margin_bottom = 50;
  double short_curve_pad = 24;
  int max_sweeps = 20;
  double min_improvement = 0.5;
};

struct CharacterCurve {
  CharacterId character;
  int first_layer = 0;
  std::vector<double> y;  // one per layer from first_layer on
  double start_x = 0;     // may extend left of the first anchor
  double end_x = 0;

  int last_layer() const { return first_layer + static_cast<int>(y.size()) - 1; }
};

struct InteractionBar {
  int layer = 0;
  InteractionId interaction;
  double top = 0;
  double bottom = 0;
};

struct GeometricStoryline {
  std::vector<double> layer_x;
  std::vector<TimestampId> layer_time;
  std::vector<std::vector<CharacterId>> layer_order;
  std::vector<CharacterCurve> curves;  // by character index
  std::vector<InteractionBar> bars;
  std::vector<double> separators;  // x of the boundaries between slices
  double width = 0;
  double height = 0;

  std::optional<double> y_at(CharacterId c, int layer) const;
};

/// Places layers on a fixed x grid and relaxes character heights toward
/// their neighbours (median sweeps followed by an order- and gap-preserving
/// projection) while the total wiggle keeps dropping.
GeometricStoryline assign_coordinates(const StorylineInstance& inst,
                                      const CombinatorialStoryline& s,
                                      const RenderConfig& cfg = {});

/// Sum over characters of |y(c, l) - y(c, l+1)| along their curves.
double total_wiggle(const GeometricStoryline& g);

/// Minimum vertical distance each adjacent pair in layer `layer` must keep.
std::vector<double> required_gaps(const StorylineInstance& inst,
                                  const CombinatorialStoryline& s, int layer,
                                  const RenderConfig& cfg = {});

/// Widens curves that live on a single layer so they stay visible, without
/// crossing the neighbouring slice separators.
GeometricStoryline pad_short_curves(GeometricStoryline g, const RenderConfig& cfg = {});

std::string emit_svg(const GeometricStoryline& g, const StorylineInstance& inst,
                     const RenderConfig& cfg = {});

}  // namespace storyweave
