// Domain model of time-interval storylines: instances, layers, combinatorial
// storylines, legality checks and the crossing oracle.

#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace storyweave {

/// Dense index into one of the instance's lists. The tag keeps character,
/// timestamp and interaction indices from being mixed up.
template <class Tag>
struct Id {
  int value = -1;

  constexpr Id() = default;
  constexpr explicit Id(int v) : value(v) {}

  friend constexpr auto operator<=>(Id, Id) = default;
};

using CharacterId = Id<struct CharacterTag>;
using TimestampId = Id<struct TimestampTag>;
using InteractionId = Id<struct InteractionTag>;

struct Interaction {
  InteractionId id;
  std::vector<CharacterId> characters;  // sorted, duplicate-free, non-empty
  TimestampId time;
};

/// A problem found while checking an instance or a storyline. `path` points
/// at the offending element, e.g. "interactions[3].characters[1]".
struct Violation {
  std::string path;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Name-based instance data as it comes out of a file.
struct RawInteraction {
  std::vector<std::string> characters;
  std::string time;
};

struct RawInstance {
  std::vector<std::string> characters;
  std::vector<std::string> timestamps;
  std::vector<RawInteraction> interactions;
};

/// The triple (characters, interactions, ordered timestamps). Immutable once
/// built; construct through validate_instance.
class StorylineInstance {
 public:
  std::size_t num_characters() const { return characters_.size(); }
  std::size_t num_timestamps() const { return timestamps_.size(); }
  std::size_t num_interactions() const { return interactions_.size(); }

  const std::string& character_name(CharacterId c) const {
    return characters_.at(c.value);
  }
  const std::string& timestamp_label(TimestampId t) const {
    return timestamps_.at(t.value);
  }
  const Interaction& interaction(InteractionId i) const {
    return interactions_.at(i.value);
  }

  const std::vector<std::string>& character_names() const {
    return characters_;
  }
  const std::vector<std::string>& timestamp_labels() const {
    return timestamps_;
  }
  const std::vector<Interaction>& interactions() const {
    return interactions_;
  }

  std::optional<CharacterId> find_character(const std::string& name) const;
  std::optional<TimestampId> find_timestamp(const std::string& label) const;

  /// Interactions with the given timestamp, in id order.
  const std::vector<InteractionId>& interactions_at(TimestampId t) const {
    return by_time_.at(t.value);
  }

  /// Earliest and latest timestamp at which the character interacts.
  TimestampId first_time(CharacterId c) const { return first_.at(c.value); }
  TimestampId last_time(CharacterId c) const { return last_.at(c.value); }

  /// Characters whose interaction span [first_time, last_time] contains t,
  /// sorted by index.
  std::vector<CharacterId> span_characters(TimestampId t) const;

 private:
  friend StorylineInstance validate_instance(const RawInstance& raw);

  std::vector<std::string> characters_;
  std::vector<std::string> timestamps_;
  std::vector<Interaction> interactions_;
  std::vector<std::vector<InteractionId>> by_time_;
  std::vector<TimestampId> first_;
  std::vector<TimestampId> last_;
};

/// Normalizes raw data into an instance. Throws ValidationError listing every
/// violation found (unknown names, empty or duplicate entries, isolated
/// characters).
StorylineInstance validate_instance(const RawInstance& raw);

struct Layer {
  TimestampId time;
  std::vector<InteractionId> interactions;
  std::vector<CharacterId> order;   // top to bottom
  std::vector<CharacterId> active;  // sorted; same elements as `order`
};

struct CombinatorialStoryline {
  std::vector<Layer> layers;  // left to right
};

/// Every violated legality rule of `s` against `inst`. Empty iff legal.
std::vector<Violation> validate_storyline(const StorylineInstance& inst,
                                          const CombinatorialStoryline& s);

struct CrossingCount {
  long total = 0;
  std::vector<long> per_gap;  // one entry per consecutive layer pair
};

/// Pairwise crossings between consecutive layers, restricted to characters
/// active in both layers of the gap.
CrossingCount count_crossings(const CombinatorialStoryline& s);

/// Inversions between two orders, restricted to characters present in both.
long count_inversions(const std::vector<CharacterId>& left,
                      const std::vector<CharacterId>& right);

/// How characters are kept active across layers.
enum class ActivityMode {
  /// Active in every layer of every timestamp between the first and last
  /// interaction timestamp, inclusive.
  Span,
  /// Active on a contiguous run of layers covering all of the character's
  /// interactions; the run may be as short as the interactions allow.
  Interval,
};

/// Per-timestamp maximum number of layers, indexed by TimestampId::value.
using LayerBudget = std::vector<int>;

/// One layer per interaction.
LayerBudget interaction_count_budget(const StorylineInstance& inst);

class SearchSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BruteForceOptions {
  /// Budget per timestamp; empty means one layer per interaction.
  LayerBudget budget;
  /// Upper bound on enumerated search states before giving up.
  double max_states = 1e7;
};

/// Minimum crossing count over all legal storylines of `inst` under the given
/// activity mode and layer budgets, by exhaustive search. Throws
/// SearchSpaceTooLarge when the estimated state count exceeds the guard and
/// std::invalid_argument when a budget is below what the conflicts require
/// to the point that no storyline exists (the result would be undefined).
long brute_force_optimum(const StorylineInstance& inst, ActivityMode mode,
                         const BruteForceOptions& options = {});

}  // namespace storyweave

template <class Tag>
struct std::hash<storyweave::Id<Tag>> {
  std::size_t operator()(storyweave::Id<Tag> id) const noexcept {
    return std::hash<int>{}(id.value);
  }
};
