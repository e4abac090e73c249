// Exhaustive reference optimum. Used as the oracle for the exact models, so it
// deliberately shares no code with them: layers are enumerated as sequences of
// pairwise-disjoint interaction subsets per timestamp, and every legal
// character permutation of every layer is considered. Crossings only couple
// consecutive layers, so the enumeration is organised as a dynamic program
// whose state is (interactions already placed in the slice, layers used, last
// layer's order); this visits every candidate storyline implicitly.
//
// In Interval mode each character is active exactly from the layer of its
// first interaction to the layer of its last one. Extending an activity run
// only adds co-active pairs and constraints, so the shortest run is optimal.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "storyweave/core.hpp"

namespace storyweave {

namespace {

using Order = std::vector<int>;
using OrderCosts = std::map<Order, long>;

constexpr long kInf = std::numeric_limits<long>::max() / 4;

long pairwise_crossings(const Order& prev, const Order& next,
                        std::vector<int>& pos) {
  for (std::size_t k = 0; k < prev.size(); ++k) pos[prev[k]] = static_cast<int>(k);
  std::vector<int> ranks;
  ranks.reserve(next.size());
  for (int c : next) {
    if (pos[c] >= 0) ranks.push_back(pos[c]);
  }
  long crossings = 0;
  for (std::size_t a = 0; a < ranks.size(); ++a) {
    for (std::size_t b = a + 1; b < ranks.size(); ++b) {
      if (ranks[a] > ranks[b]) ++crossings;
    }
  }
  for (int c : prev) pos[c] = -1;
  return crossings;
}

double factorial(std::size_t k) {
  double f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

class SliceSearch {
 public:
  SliceSearch(const StorylineInstance& inst, ActivityMode mode, TimestampId t,
              int budget)
      : inst_(inst), mode_(mode), t_(t), budget_(budget) {
    const auto& ids = inst.interactions_at(t);
    m_ = static_cast<int>(ids.size());
    for (InteractionId id : ids) members_.push_back(inst.interaction(id).characters);
    conflicts_.assign(m_, 0);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) {
        if (i != j && share_character(members_[i], members_[j])) {
          conflicts_[i] |= 1u << j;
        }
      }
    }
    for (CharacterId c : inst.span_characters(t)) {
      unsigned mask = 0;
      for (int i = 0; i < m_; ++i) {
        if (std::binary_search(members_[i].begin(), members_[i].end(), c)) {
          mask |= 1u << i;
        }
      }
      span_.push_back({c.value, mask, inst.first_time(c) == t,
                       inst.last_time(c) == t});
    }
  }

  /// Extends every partial storyline in `carry` by all arrangements of this
  /// slice; returns the best cost per final layer order.
  OrderCosts run(const OrderCosts& carry) {
    const unsigned full = (m_ == 32) ? ~0u : ((1u << m_) - 1);
    std::vector<std::vector<OrderCosts>> table(
        static_cast<std::size_t>(full) + 1,
        std::vector<OrderCosts>(budget_ + 1));
    table[0][0] = carry;
    std::vector<int> pos(inst_.num_characters(), -1);

    for (unsigned used = 0; used < full; ++used) {
      for (int count = 0; count < budget_; ++count) {
        const OrderCosts& here = table[used][count];
        if (here.empty()) continue;
        std::map<Order, long> best_into;  // min over `here` of cost + crossings
        const unsigned rest = full & ~used;
        for (unsigned s = rest; s != 0; s = (s - 1) & rest) {
          if (!independent(s)) continue;
          const Order active = active_set(used, s);
          for (const Order& order : legal_orders(active, s)) {
            auto [it, fresh] = best_into.try_emplace(order, kInf);
            if (fresh) {
              for (const auto& [prev, cost] : here) {
                it->second = std::min(
                    it->second, cost + pairwise_crossings(prev, order, pos));
              }
            }
            auto& slot = table[used | s][count + 1];
            auto [jt, inserted] = slot.try_emplace(order, it->second);
            if (!inserted) jt->second = std::min(jt->second, it->second);
          }
        }
      }
    }

    OrderCosts out;
    for (int count = 1; count <= budget_; ++count) {
      for (const auto& [order, cost] : table[full][count]) {
        auto [it, inserted] = out.try_emplace(order, cost);
        if (!inserted) it->second = std::min(it->second, cost);
      }
    }
    return out;
  }

 private:
  struct SpanCharacter {
    int id;
    unsigned mask;  // interactions at this timestamp that contain it
    bool starts_here;
    bool ends_here;
  };

  static bool share_character(const std::vector<CharacterId>& a,
                              const std::vector<CharacterId>& b) {
    for (CharacterId c : a) {
      if (std::binary_search(b.begin(), b.end(), c)) return true;
    }
    return false;
  }

  bool independent(unsigned s) const {
    for (int i = 0; i < m_; ++i) {
      if ((s >> i & 1u) && (conflicts_[i] & s)) return false;
    }
    return true;
  }

  Order active_set(unsigned used, unsigned s) const {
    Order out;
    const unsigned later = ~(used | s);
    for (const auto& c : span_) {
      bool active = true;
      if (mode_ == ActivityMode::Interval) {
        const bool started = (c.mask & (used | s)) != 0;
        const bool continues = (c.mask & (s | later)) != 0;
        if (c.starts_here && !started) active = false;
        if (c.ends_here && !continues) active = false;
      }
      if (active) out.push_back(c.id);
    }
    return out;
  }

  const std::vector<Order>& legal_orders(const Order& active, unsigned s) {
    auto key = std::make_pair(active, s);
    if (auto it = orders_cache_.find(key); it != orders_cache_.end()) {
      return it->second;
    }
    std::vector<Order> legal;
    Order perm = active;  // sorted ascending already
    std::vector<int> pos(inst_.num_characters(), -1);
    do {
      for (std::size_t k = 0; k < perm.size(); ++k) pos[perm[k]] = static_cast<int>(k);
      bool ok = true;
      for (int i = 0; i < m_ && ok; ++i) {
        if (!(s >> i & 1u)) continue;
        int lo = std::numeric_limits<int>::max(), hi = -1;
        for (CharacterId c : members_[i]) {
          lo = std::min(lo, pos[c.value]);
          hi = std::max(hi, pos[c.value]);
        }
        ok = hi - lo + 1 == static_cast<int>(members_[i].size());
      }
      if (ok) legal.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return orders_cache_.emplace(key, std::move(legal)).first->second;
  }

  const StorylineInstance& inst_;
  ActivityMode mode_;
  TimestampId t_;
  int budget_;
  int m_ = 0;
  std::vector<std::vector<CharacterId>> members_;
  std::vector<unsigned> conflicts_;
  std::vector<SpanCharacter> span_;
  std::map<std::pair<Order, unsigned>, std::vector<Order>> orders_cache_;
};

}  // namespace

long brute_force_optimum(const StorylineInstance& inst, ActivityMode mode,
                         const BruteForceOptions& options) {
  LayerBudget budget = options.budget.empty() ? interaction_count_budget(inst)
                                              : options.budget;
  if (budget.size() != inst.num_timestamps()) {
    throw std::invalid_argument("layer budget does not match timestamp count");
  }

  double states = 0;
  for (std::size_t t = 0; t < inst.num_timestamps(); ++t) {
    const TimestampId tid(static_cast<int>(t));
    const std::size_t m = inst.interactions_at(tid).size();
    if (m == 0) continue;
    if (m > 20) {
      throw SearchSpaceTooLarge(fmt::format(
          "search space too large: {} interactions at timestamp \"{}\"", m,
          inst.timestamp_label(tid)));
    }
    const int layers = std::min<int>(budget[t], static_cast<int>(m));
    states += std::pow(3.0, static_cast<double>(m)) * std::max(layers, 1) *
              factorial(inst.span_characters(tid).size());
  }
  if (states > options.max_states) {
    throw SearchSpaceTooLarge(fmt::format(
        "search space too large: ~{:.3g} states (limit {:.3g})", states,
        options.max_states));
  }

  OrderCosts carry{{Order{}, 0}};
  for (std::size_t t = 0; t < inst.num_timestamps(); ++t) {
    const TimestampId tid(static_cast<int>(t));
    const int m = static_cast<int>(inst.interactions_at(tid).size());
    if (m == 0) continue;
    SliceSearch slice(inst, mode, tid, std::min(budget[t], m));
    carry = slice.run(carry);
    if (carry.empty()) {
      throw std::invalid_argument(fmt::format(
          "no storyline fits the layer budget at timestamp \"{}\"",
          inst.timestamp_label(tid)));
    }
  }
  long best = kInf;
  for (const auto& [order, cost] : carry) best = std::min(best, cost);
  return best == kInf ? 0 : best;
}

}  // namespace storyweave
