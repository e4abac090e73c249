#include "storyweave/formulations.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace storyweave {

namespace {

using bip::Relation;
using bip::Term;
using bip::VarId;

bool contains(const std::vector<CharacterId>& sorted, CharacterId c) {
  return std::binary_search(sorted.begin(), sorted.end(), c);
}

class ModelBuilder {
 public:
  ModelBuilder(const StorylineInstance& inst, ModelKind kind, const ModelOptions& options)
      : inst_(inst), options_(options) {
    model_.kind = kind;
  }

  void add_slot(LayerSlot slot) {
    auto& cat = model_.catalog;
    cat.slots.push_back(slot);
    cat.potential.push_back(potential_characters(inst_, model_.kind, slot.timestamp));
  }

  Model build() {
    if (model_.kind.family != ModelFamily::FixedLayer) add_assignment();
    add_ordering();
    add_tree_constraints();
    if (model_.kind.family == ModelFamily::Ilp2) add_activity();
    add_crossings();
    if (options_.symmetry_breaking) add_symmetry_cuts();
    return std::move(model_);
  }

  std::vector<std::vector<InteractionId>>& fixed_layers() { return model_.catalog.fixed; }

 private:
  bip::BinaryProgram& p() { return model_.program; }
  VariableCatalog& cat() { return model_.catalog; }

  VarId x(int slot, CharacterId a, CharacterId b) const {
    return model_.catalog.x.at({slot, a.value, b.value});
  }

  std::vector<int> slots_of(TimestampId t) const {
    std::vector<int> out;
    for (std::size_t s = 0; s < model_.catalog.slots.size(); ++s) {
      if (model_.catalog.slots[s].timestamp == t) out.push_back(static_cast<int>(s));
    }
    return out;
  }

  // Assignment of interactions to slots and disjointness within a slot.
  void add_assignment() {
    for (std::size_t t = 0; t < inst_.num_timestamps(); ++t) {
      const TimestampId tid(static_cast<int>(t));
      const auto slots = slots_of(tid);
      const auto& here = inst_.interactions_at(tid);
      for (int s : slots) {
        for (InteractionId id : here) {
          cat().y[{s, id.value}] = p().add_variable(fmt::format("y_s{}_i{}", s, id.value));
        }
      }
      for (InteractionId id : here) {
        std::vector<Term> once;
        for (int s : slots) once.push_back({1, cat().y.at({s, id.value})});
        if (once.empty()) {
          // No slot for this timestamp: nothing can satisfy the assignment.
          infeasible_ = true;
          continue;
        }
        p().add_constraint(std::move(once), Relation::Equal, 1);
      }
      for (std::size_t i = 0; i < here.size(); ++i) {
        for (std::size_t j = i + 1; j < here.size(); ++j) {
          const auto& ci = inst_.interaction(here[i]).characters;
          const auto& cj = inst_.interaction(here[j]).characters;
          const bool share = std::any_of(ci.begin(), ci.end(),
                                         [&](CharacterId c) { return contains(cj, c); });
          if (!share) continue;
          for (int s : slots) {
            p().add_constraint({{1, cat().y.at({s, here[i].value})},
                                {1, cat().y.at({s, here[j].value})}},
                               Relation::LessEqual, 1);
          }
        }
      }
    }
    if (infeasible_) {
      // 0/1 variable forced to 2: the program is reported infeasible.
      const VarId v = p().add_variable("no_slot_for_interaction");
      p().add_constraint({{1, v}}, Relation::GreaterEqual, 2);
    }
  }

  // Pairwise order variables and transitivity.
  void add_ordering() {
    for (std::size_t s = 0; s < cat().slots.size(); ++s) {
      const auto& cs = cat().potential[s];
      const int si = static_cast<int>(s);
      for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
          cat().x[{si, cs[i].value, cs[j].value}] =
              p().add_variable(fmt::format("x_s{}_{}_{}", s, cs[i].value, cs[j].value));
        }
      }
      for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
          for (std::size_t k = j + 1; k < cs.size(); ++k) {
            std::vector<Term> terms{{1, x(si, cs[i], cs[j])},
                                    {1, x(si, cs[j], cs[k])},
                                    {-1, x(si, cs[i], cs[k])}};
            p().add_constraint(terms, Relation::GreaterEqual, 0);
            p().add_constraint(std::move(terms), Relation::LessEqual, 1);
          }
        }
      }
    }
  }

  // Keeps every non-member of an interaction entirely above or below it.
  // `guard` is the assignment variable, or nullopt when the interaction is
  // fixed to the slot.
  void add_tree(int s, const Interaction& interaction, std::optional<VarId> guard) {
    const auto& members = interaction.characters;
    const auto& cs = cat().potential[s];
    auto guarded = [&](std::vector<Term> terms, Relation op, long rhs, long guard_coef) {
      if (guard) {
        terms.push_back({guard_coef, *guard});
      } else {
        rhs -= guard_coef;
      }
      p().add_constraint(std::move(terms), op, rhs);
    };
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const CharacterId ci = members[a], cj = members[b];
        for (CharacterId ck : cs) {
          if (contains(members, ck)) continue;
          if (ck > cj) {
            // ck below both or above both: x(i,k) == x(j,k)
            guarded({{1, x(s, ci, ck)}, {-1, x(s, cj, ck)}}, Relation::LessEqual, 1, 1);
            guarded({{1, x(s, cj, ck)}, {-1, x(s, ci, ck)}}, Relation::LessEqual, 1, 1);
          } else if (ck < ci) {
            // x(k,i) == x(k,j)
            guarded({{1, x(s, ck, ci)}, {-1, x(s, ck, cj)}}, Relation::LessEqual, 1, 1);
            guarded({{1, x(s, ck, cj)}, {-1, x(s, ck, ci)}}, Relation::LessEqual, 1, 1);
          } else {
            // ci < ck < cj: ck precedes ci exactly when it precedes cj, i.e.
            // x(i,k) + x(k,j) == 1.
            guarded({{1, x(s, ci, ck)}, {1, x(s, ck, cj)}}, Relation::LessEqual, 2, 1);
            guarded({{1, x(s, ci, ck)}, {1, x(s, ck, cj)}}, Relation::GreaterEqual, 0, -1);
          }
        }
      }
    }
  }

  void add_tree_constraints() {
    for (std::size_t s = 0; s < cat().slots.size(); ++s) {
      const int si = static_cast<int>(s);
      if (model_.kind.family == ModelFamily::FixedLayer) {
        for (InteractionId id : cat().fixed[s]) add_tree(si, inst_.interaction(id), std::nullopt);
        continue;
      }
      for (InteractionId id : inst_.interactions_at(cat().slots[s].timestamp)) {
        add_tree(si, inst_.interaction(id), cat().y.at({si, id.value}));
      }
    }
  }

  // Activity variables: forced on by interactions, contiguous across slots.
  void add_activity() {
    const int n = static_cast<int>(inst_.num_characters());
    std::vector<std::vector<int>> slots_of_char(n);
    for (std::size_t s = 0; s < cat().slots.size(); ++s) {
      for (CharacterId c : cat().potential[s]) {
        cat().a[{c.value, static_cast<int>(s)}] =
            p().add_variable(fmt::format("a_{}_s{}", c.value, s));
        slots_of_char[c.value].push_back(static_cast<int>(s));
      }
    }
    for (std::size_t s = 0; s < cat().slots.size(); ++s) {
      const int si = static_cast<int>(s);
      for (InteractionId id : inst_.interactions_at(cat().slots[s].timestamp)) {
        for (CharacterId c : inst_.interaction(id).characters) {
          p().add_constraint({{1, cat().a.at({c.value, si})}, {-1, cat().y.at({si, id.value})}},
                             Relation::GreaterEqual, 0);
        }
      }
    }
    for (int c = 0; c < n; ++c) {
      const auto& ls = slots_of_char[c];
      for (std::size_t i = 0; i < ls.size(); ++i) {
        for (std::size_t j = i + 1; j < ls.size(); ++j) {
          for (std::size_t k = j + 1; k < ls.size(); ++k) {
            p().add_constraint({{1, cat().a.at({c, ls[j]})},
                                {-1, cat().a.at({c, ls[i]})},
                                {-1, cat().a.at({c, ls[k]})}},
                               Relation::GreaterEqual, -1);
          }
        }
      }
    }
  }

  // z >= x xor x' between consecutive slots; ILP2 only counts pairs whose
  // four activity variables are all set.
  void add_crossings() {
    const bool activity = model_.kind.family == ModelFamily::Ilp2;
    for (std::size_t s = 0; s + 1 < cat().slots.size(); ++s) {
      const int left = static_cast<int>(s), right = left + 1;
      std::vector<CharacterId> common;
      std::set_intersection(cat().potential[s].begin(), cat().potential[s].end(),
                            cat().potential[s + 1].begin(), cat().potential[s + 1].end(),
                            std::back_inserter(common));
      for (std::size_t i = 0; i < common.size(); ++i) {
        for (std::size_t j = i + 1; j < common.size(); ++j) {
          const CharacterId ci = common[i], cj = common[j];
          const VarId z = p().add_variable(fmt::format("z_g{}_{}_{}", s, ci.value, cj.value));
          cat().z[{left, ci.value, cj.value}] = z;
          p().add_objective(1, z);
          const VarId xl = x(left, ci, cj), xr = x(right, ci, cj);
          if (!activity) {
            p().add_constraint({{1, z}, {-1, xl}, {1, xr}}, Relation::GreaterEqual, 0);
            p().add_constraint({{1, z}, {-1, xr}, {1, xl}}, Relation::GreaterEqual, 0);
            continue;
          }
          const VarId a_il = cat().a.at({ci.value, left}), a_ir = cat().a.at({ci.value, right});
          const VarId a_jl = cat().a.at({cj.value, left}), a_jr = cat().a.at({cj.value, right});
          p().add_constraint({{1, z}, {-1, xl}, {1, xr}, {-1, a_il}, {-1, a_ir}, {-1, a_jl},
                              {-1, a_jr}},
                             Relation::GreaterEqual, -4);
          const long a_ir_coef = options_.literal_xor_guard ? 1 : -1;
          p().add_constraint({{1, z}, {-1, xr}, {1, xl}, {-1, a_il}, {a_ir_coef, a_ir},
                              {-1, a_jl}, {-1, a_jr}},
                             Relation::GreaterEqual, -4);
        }
      }
    }
  }

  void add_symmetry_cuts() {
    // Reversing every layer's order keeps all crossings.
    if (!cat().slots.empty() && cat().potential[0].size() >= 2) {
      const auto& cs = cat().potential[0];
      p().add_constraint({{1, x(0, cs[0], cs[1])}}, Relation::GreaterEqual, 1);
    }
    if (model_.kind.family == ModelFamily::FixedLayer) return;
    // An empty slot can always be moved to the end of its slice copying its
    // left neighbour, so occupied slots may be required to come first.
    for (std::size_t t = 0; t < inst_.num_timestamps(); ++t) {
      const TimestampId tid(static_cast<int>(t));
      const auto slots = slots_of(tid);
      const auto& here = inst_.interactions_at(tid);
      for (std::size_t k = 1; k < slots.size(); ++k) {
        for (InteractionId id : here) {
          std::vector<Term> terms{{1, cat().y.at({slots[k], id.value})}};
          for (InteractionId other : here) {
            terms.push_back({-1, cat().y.at({slots[k - 1], other.value})});
          }
          p().add_constraint(std::move(terms), Relation::LessEqual, 0);
        }
      }
    }
  }

  const StorylineInstance& inst_;
  ModelOptions options_;
  Model model_;
  bool infeasible_ = false;
};

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind.family) {
    case ModelFamily::Ilp1:
      return kind.minimize_layers ? "ilp1ml" : "ilp1";
    case ModelFamily::Ilp2:
      return kind.minimize_layers ? "ilp2ml" : "ilp2";
    case ModelFamily::FixedLayer:
      return "fixed";
  }
  return "unknown";
}

std::vector<CharacterId> potential_characters(const StorylineInstance& inst,
                                              ModelKind /*kind*/, TimestampId t) {
  return inst.span_characters(t);
}

Model build_model(const StorylineInstance& inst, ModelKind kind, const LayerBudget& budget,
                  const ModelOptions& options) {
  if (kind.family == ModelFamily::FixedLayer) {
    throw std::invalid_argument("use build_fixed_model for the fixed-layer model");
  }
  if (budget.size() != inst.num_timestamps()) {
    throw std::invalid_argument("layer budget does not match timestamp count");
  }
  ModelBuilder builder(inst, kind, options);
  for (std::size_t t = 0; t < inst.num_timestamps(); ++t) {
    for (int pos = 0; pos < budget[t]; ++pos) {
      builder.add_slot({TimestampId(static_cast<int>(t)), pos});
    }
  }
  return builder.build();
}

Model build_fixed_model(const StorylineInstance& inst,
                        const std::vector<std::vector<InteractionId>>& layers,
                        const ModelOptions& options) {
  ModelBuilder builder(inst, kFixedLayer, options);
  std::vector<int> seen(inst.num_interactions(), 0);
  TimestampId previous(-1);
  int position = 0;
  for (const auto& layer : layers) {
    if (layer.empty()) throw std::invalid_argument("empty layer in fixed assignment");
    const TimestampId t = inst.interaction(layer.front()).time;
    for (InteractionId id : layer) {
      if (inst.interaction(id).time != t) {
        throw std::invalid_argument("fixed layer mixes timestamps");
      }
      ++seen.at(id.value);
    }
    if (t < previous) throw std::invalid_argument("fixed layers out of timestamp order");
    position = t == previous ? position + 1 : 0;
    previous = t;
    builder.add_slot({t, position});
    builder.fixed_layers().push_back(layer);
  }
  if (std::any_of(seen.begin(), seen.end(), [](int k) { return k != 1; })) {
    throw std::invalid_argument("fixed layers must place every interaction exactly once");
  }
  return builder.build();
}

CombinatorialStoryline decode(const StorylineInstance& inst, const Model& model,
                              const bip::SolveResult& result) {
  if (!result.assignment) throw std::invalid_argument("no assignment to decode");
  const auto& value = *result.assignment;
  const auto& cat = model.catalog;
  auto is_set = [&](VarId v) { return static_cast<bool>(value.at(v.index)); };

  CombinatorialStoryline out;
  for (std::size_t s = 0; s < cat.slots.size(); ++s) {
    const int si = static_cast<int>(s);
    Layer layer;
    layer.time = cat.slots[s].timestamp;
    if (model.kind.family == ModelFamily::FixedLayer) {
      layer.interactions = cat.fixed[s];
    } else {
      for (InteractionId id : inst.interactions_at(layer.time)) {
        if (is_set(cat.y.at({si, id.value}))) layer.interactions.push_back(id);
      }
    }
    if (layer.interactions.empty()) continue;
    std::sort(layer.interactions.begin(), layer.interactions.end());

    const auto& cs = cat.potential[s];
    std::vector<int> before(cs.size(), 0);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      for (std::size_t j = i + 1; j < cs.size(); ++j) {
        if (is_set(cat.x.at({si, cs[i].value, cs[j].value}))) {
          ++before[j];
        } else {
          ++before[i];
        }
      }
    }
    std::vector<CharacterId> order(cs.size(), CharacterId(-1));
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (before[i] >= static_cast<int>(cs.size()) || order[before[i]].value >= 0) {
        throw std::logic_error(
            fmt::format("ordering variables of slot {} are not transitive", s));
      }
      order[before[i]] = cs[i];
    }
    if (model.kind.family == ModelFamily::Ilp2) {
      std::erase_if(order, [&](CharacterId c) { return !is_set(cat.a.at({c.value, si})); });
    }
    layer.order = order;
    layer.active = order;
    std::sort(layer.active.begin(), layer.active.end());
    out.layers.push_back(std::move(layer));
  }
  return out;
}

}  // namespace storyweave
