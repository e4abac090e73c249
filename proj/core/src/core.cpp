#include "storyweave/core.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

namespace storyweave {

namespace {

std::string join_messages(const std::vector<Violation>& violations) {
  std::string out = "invalid input:";
  for (const auto& v : violations) {
    out += fmt::format("\n  {}: {}", v.path, v.message);
  }
  return out;
}

// Merge-sort inversion count on a sequence of ranks.
long sort_and_count(std::vector<int>& a, std::vector<int>& scratch,
                    std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  long inv = sort_and_count(a, scratch, lo, mid) +
             sort_and_count(a, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (a[j] < a[i]) {
      inv += static_cast<long>(mid - i);
      scratch[k++] = a[j++];
    } else {
      scratch[k++] = a[i++];
    }
  }
  while (i < mid) scratch[k++] = a[i++];
  while (j < hi) scratch[k++] = a[j++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, a.begin() + lo);
  return inv;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_messages(violations)),
      violations_(std::move(violations)) {}

std::optional<CharacterId> StorylineInstance::find_character(
    const std::string& name) const {
  auto it = std::find(characters_.begin(), characters_.end(), name);
  if (it == characters_.end()) return std::nullopt;
  return CharacterId(static_cast<int>(it - characters_.begin()));
}

std::optional<TimestampId> StorylineInstance::find_timestamp(
    const std::string& label) const {
  auto it = std::find(timestamps_.begin(), timestamps_.end(), label);
  if (it == timestamps_.end()) return std::nullopt;
  return TimestampId(static_cast<int>(it - timestamps_.begin()));
}

std::vector<CharacterId> StorylineInstance::span_characters(
    TimestampId t) const {
  std::vector<CharacterId> out;
  for (std::size_t c = 0; c < characters_.size(); ++c) {
    if (first_[c] <= t && t <= last_[c]) {
      out.emplace_back(static_cast<int>(c));
    }
  }
  return out;
}

StorylineInstance validate_instance(const RawInstance& raw) {
  std::vector<Violation> errors;
  StorylineInstance inst;

  std::unordered_map<std::string, int> char_index;
  for (std::size_t i = 0; i < raw.characters.size(); ++i) {
    const auto& name = raw.characters[i];
    const auto path = fmt::format("characters[{}]", i);
    if (name.empty()) {
      errors.push_back({path, "empty character name"});
    } else if (!char_index.emplace(name, static_cast<int>(i)).second) {
      errors.push_back({path, fmt::format("duplicate character \"{}\"", name)});
    }
  }

  std::unordered_map<std::string, int> time_index;
  for (std::size_t i = 0; i < raw.timestamps.size(); ++i) {
    const auto& label = raw.timestamps[i];
    const auto path = fmt::format("timestamps[{}]", i);
    if (label.empty()) {
      errors.push_back({path, "empty timestamp label"});
    } else if (!time_index.emplace(label, static_cast<int>(i)).second) {
      errors.push_back({path, fmt::format("duplicate timestamp \"{}\"", label)});
    }
  }

  std::vector<bool> seen(raw.characters.size(), false);
  for (std::size_t j = 0; j < raw.interactions.size(); ++j) {
    const auto& ri = raw.interactions[j];
    const auto path = fmt::format("interactions[{}]", j);
    Interaction interaction;
    interaction.id = InteractionId(static_cast<int>(j));

    if (auto it = time_index.find(ri.time); it != time_index.end()) {
      interaction.time = TimestampId(it->second);
    } else {
      errors.push_back(
          {path + ".time", fmt::format("unknown timestamp \"{}\"", ri.time)});
    }
    if (ri.characters.empty()) {
      errors.push_back({path + ".characters", "empty interaction"});
    }
    for (std::size_t k = 0; k < ri.characters.size(); ++k) {
      const auto& name = ri.characters[k];
      const auto cpath = fmt::format("{}.characters[{}]", path, k);
      auto it = char_index.find(name);
      if (it == char_index.end()) {
        errors.push_back(
            {cpath, fmt::format("unknown character \"{}\"", name)});
        continue;
      }
      CharacterId c(it->second);
      if (std::find(interaction.characters.begin(),
                    interaction.characters.end(),
                    c) != interaction.characters.end()) {
        errors.push_back(
            {cpath, fmt::format("duplicate character \"{}\"", name)});
        continue;
      }
      interaction.characters.push_back(c);
      seen[c.value] = true;
    }
    std::sort(interaction.characters.begin(), interaction.characters.end());
    inst.interactions_.push_back(std::move(interaction));
  }

  for (std::size_t i = 0; i < raw.characters.size(); ++i) {
    if (!seen[i] && !raw.characters[i].empty()) {
      errors.push_back(
          {fmt::format("characters[{}]", i),
           fmt::format("isolated character \"{}\"", raw.characters[i])});
    }
  }

  if (!errors.empty()) throw ValidationError(std::move(errors));

  inst.characters_ = raw.characters;
  inst.timestamps_ = raw.timestamps;
  inst.by_time_.resize(raw.timestamps.size());
  inst.first_.assign(raw.characters.size(),
                     TimestampId(static_cast<int>(raw.timestamps.size())));
  inst.last_.assign(raw.characters.size(), TimestampId(-1));
  for (const auto& interaction : inst.interactions_) {
    inst.by_time_[interaction.time.value].push_back(interaction.id);
    for (CharacterId c : interaction.characters) {
      inst.first_[c.value] = std::min(inst.first_[c.value], interaction.time);
      inst.last_[c.value] = std::max(inst.last_[c.value], interaction.time);
    }
  }
  return inst;
}

std::vector<Violation> validate_storyline(const StorylineInstance& inst,
                                          const CombinatorialStoryline& s) {
  std::vector<Violation> out;
  const int n = static_cast<int>(inst.num_characters());
  const int m = static_cast<int>(inst.num_interactions());
  std::vector<int> placed(m, 0);
  // Per character, layer indices where it is active.
  std::vector<std::vector<int>> active_layers(n);

  for (std::size_t li = 0; li < s.layers.size(); ++li) {
    const Layer& layer = s.layers[li];
    const auto lpath = fmt::format("layers[{}]", li);

    if (layer.time.value < 0 ||
        layer.time.value >= static_cast<int>(inst.num_timestamps())) {
      out.push_back({lpath + ".time", "unknown timestamp"});
      continue;
    }
    if (li > 0 && layer.time < s.layers[li - 1].time) {
      out.push_back({lpath + ".time", "layer timestamps decrease"});
    }
    if (layer.interactions.empty()) {
      out.push_back({lpath + ".interactions", "empty layer"});
    }

    // Position of each character in this layer's order.
    std::vector<int> pos(n, -1);
    bool order_ok = true;
    for (std::size_t k = 0; k < layer.order.size(); ++k) {
      CharacterId c = layer.order[k];
      if (c.value < 0 || c.value >= n) {
        out.push_back({fmt::format("{}.order[{}]", lpath, k),
                       "unknown character"});
        order_ok = false;
        continue;
      }
      if (pos[c.value] >= 0) {
        out.push_back({fmt::format("{}.order[{}]", lpath, k),
                       fmt::format("character \"{}\" appears twice in layer",
                                   inst.character_name(c))});
        order_ok = false;
        continue;
      }
      pos[c.value] = static_cast<int>(k);
    }
    {
      std::vector<CharacterId> sorted_order = layer.order;
      std::sort(sorted_order.begin(), sorted_order.end());
      std::vector<CharacterId> sorted_active = layer.active;
      std::sort(sorted_active.begin(), sorted_active.end());
      if (sorted_order != sorted_active) {
        out.push_back({lpath + ".order", "order is not a permutation of active"});
      }
    }
    if (order_ok) {
      for (CharacterId c : layer.order) active_layers[c.value].push_back(li);
    }

    std::vector<int> owner(n, -1);
    for (std::size_t k = 0; k < layer.interactions.size(); ++k) {
      InteractionId id = layer.interactions[k];
      const auto ipath = fmt::format("{}.interactions[{}]", lpath, k);
      if (id.value < 0 || id.value >= m) {
        out.push_back({ipath, "unknown interaction"});
        continue;
      }
      ++placed[id.value];
      const Interaction& interaction = inst.interaction(id);
      if (interaction.time != layer.time) {
        out.push_back({ipath, "interaction timestamp differs from layer"});
      }
      int lo = n, hi = -1;
      bool all_present = true;
      for (CharacterId c : interaction.characters) {
        if (owner[c.value] >= 0) {
          out.push_back({ipath, fmt::format("layer interactions intersect on "
                                            "\"{}\"",
                                            inst.character_name(c))});
        }
        owner[c.value] = id.value;
        if (pos[c.value] < 0) {
          out.push_back({ipath, fmt::format("character \"{}\" not active",
                                            inst.character_name(c))});
          all_present = false;
          continue;
        }
        lo = std::min(lo, pos[c.value]);
        hi = std::max(hi, pos[c.value]);
      }
      if (all_present && hi - lo + 1 !=
                             static_cast<int>(interaction.characters.size())) {
        out.push_back({ipath, "interaction not consecutive"});
      }
    }
  }

  for (int j = 0; j < m; ++j) {
    if (placed[j] == 0) {
      out.push_back({fmt::format("interactions[{}]", j),
                     "interaction not placed in any layer"});
    } else if (placed[j] > 1) {
      out.push_back({fmt::format("interactions[{}]", j),
                     "interaction placed in more than one layer"});
    }
  }

  for (int c = 0; c < n; ++c) {
    const auto& ls = active_layers[c];
    if (ls.empty()) {
      out.push_back({fmt::format("characters[{}]", c),
                     fmt::format("character \"{}\" never active",
                                 inst.character_name(CharacterId(c)))});
      continue;
    }
    if (ls.back() - ls.front() + 1 != static_cast<int>(ls.size())) {
      out.push_back({fmt::format("characters[{}]", c),
                     fmt::format("activity of \"{}\" is not contiguous",
                                 inst.character_name(CharacterId(c)))});
    }
  }
  return out;
}

long count_inversions(const std::vector<CharacterId>& left,
                      const std::vector<CharacterId>& right) {
  std::unordered_map<int, int> rank_right;
  rank_right.reserve(right.size());
  for (std::size_t k = 0; k < right.size(); ++k) {
    rank_right.emplace(right[k].value, static_cast<int>(k));
  }
  std::vector<int> seq;
  seq.reserve(left.size());
  for (CharacterId c : left) {
    if (auto it = rank_right.find(c.value); it != rank_right.end()) {
      seq.push_back(it->second);
    }
  }
  std::vector<int> scratch(seq.size());
  return sort_and_count(seq, scratch, 0, seq.size());
}

CrossingCount count_crossings(const CombinatorialStoryline& s) {
  CrossingCount out;
  for (std::size_t i = 0; i + 1 < s.layers.size(); ++i) {
    const long gap =
        count_inversions(s.layers[i].order, s.layers[i + 1].order);
    out.per_gap.push_back(gap);
    out.total += gap;
  }
  return out;
}

LayerBudget interaction_count_budget(const StorylineInstance& inst) {
  LayerBudget budget(inst.num_timestamps(), 0);
  for (std::size_t t = 0; t < inst.num_timestamps(); ++t) {
    budget[t] = static_cast<int>(
        inst.interactions_at(TimestampId(static_cast<int>(t))).size());
  }
  return budget;
}

}  // namespace storyweave
