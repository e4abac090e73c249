// Exact crossing-minimization models over a fixed sequence of layer slots,
// and decoding of solver assignments back into storylines.
//
// ILP1 keeps a character active on every slot between the timestamps of its
// first and last interaction. ILP2 adds activity variables so a character's
// curve only covers what its interactions require. The "ML" variants give
// each timestamp only as many slots as its conflict graph needs colors.
// FixedLayer takes the interaction-to-layer assignment as input and only
// orders characters.

#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <tuple>
#include <vector>

#include "storyweave/bip.hpp"
#include "storyweave/core.hpp"

namespace storyweave {

enum class ModelFamily { Ilp1, Ilp2, FixedLayer };

struct ModelKind {
  ModelFamily family = ModelFamily::Ilp1;
  bool minimize_layers = false;

  friend bool operator==(const ModelKind&, const ModelKind&) = default;
};

inline constexpr ModelKind kIlp1{ModelFamily::Ilp1, false};
inline constexpr ModelKind kIlp1ML{ModelFamily::Ilp1, true};
inline constexpr ModelKind kIlp2{ModelFamily::Ilp2, false};
inline constexpr ModelKind kIlp2ML{ModelFamily::Ilp2, true};
inline constexpr ModelKind kFixedLayer{ModelFamily::FixedLayer, false};

std::string_view to_string(ModelKind kind);

/// A layer position: slots are ordered by (timestamp, position).
struct LayerSlot {
  TimestampId timestamp;
  int position = 0;

  friend auto operator<=>(const LayerSlot&, const LayerSlot&) = default;
};

/// Characters that may be active on a slot at timestamp `t`: those whose
/// interactions start at or before t and end at or after t. Identical for
/// every family.
std::vector<CharacterId> potential_characters(const StorylineInstance& inst,
                                              ModelKind kind, TimestampId t);

struct ModelOptions {
  /// Adds solution-preserving symmetry cuts: occupied slots come first in
  /// each slice, and the first pair of the first slot is ordered.
  bool symmetry_breaking = true;
  /// Use the activity-guarded xor constraint exactly as printed in the
  /// source formulation (one activity term subtracted) instead of the
  /// symmetric form.
  bool literal_xor_guard = false;
};

/// Maps every model symbol to its solver variable. Indices are slot and gap
/// positions in `slots` order; character pairs are (lower, higher) index.
struct VariableCatalog {
  std::vector<LayerSlot> slots;
  std::vector<std::vector<CharacterId>> potential;  // per slot
  /// FixedLayer only: the interactions of each slot.
  std::vector<std::vector<InteractionId>> fixed;

  std::map<std::pair<int, int>, bip::VarId> y;             // (slot, interaction)
  std::map<std::tuple<int, int, int>, bip::VarId> x;       // (slot, ci, cj)
  std::map<std::tuple<int, int, int>, bip::VarId> z;       // (gap, ci, cj)
  std::map<std::pair<int, int>, bip::VarId> a;             // (character, slot)
};

struct Model {
  ModelKind kind;
  bip::BinaryProgram program;
  VariableCatalog catalog;
};

/// Builds ILP1/ILP1ML/ILP2/ILP2ML with `budget[t]` slots for timestamp t.
/// A budget below what the conflicts need yields an infeasible program.
Model build_model(const StorylineInstance& inst, ModelKind kind,
                  const LayerBudget& budget, const ModelOptions& options = {});

/// Builds the fixed-assignment model: `layers` lists the interactions of
/// every layer, left to right. Throws std::invalid_argument when the layers
/// are not a valid assignment.
Model build_fixed_model(const StorylineInstance& inst,
                        const std::vector<std::vector<InteractionId>>& layers,
                        const ModelOptions& options = {});

/// Turns a solver assignment into a storyline. Empty slots are dropped.
/// Throws std::invalid_argument without an assignment and std::logic_error
/// when the ordering variables do not describe a total order.
CombinatorialStoryline decode(const StorylineInstance& inst, const Model& model,
                              const bip::SolveResult& result);

}  // namespace storyweave
