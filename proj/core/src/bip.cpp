#include "storyweave/bip.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace storyweave::bip {

namespace {

bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
           (ch >= '0' && ch <= '9') || ch == '_';
  });
}

constexpr long kNoBound = std::numeric_limits<long>::max() / 4;

// Constraint rows in the form  sum(coef * x) <= rhs.
struct Row {
  std::vector<std::pair<int, long>> terms;
  long rhs;
};

class Search {
 public:
  Search(const BinaryProgram& program, const SolveOptions& options, Branching branching)
      : program_(program), options_(options), branching_(branching) {
    const int n = static_cast<int>(program.num_variables());
    for (const auto& c : program.constraints()) {
      if (c.op != Relation::GreaterEqual) add_row(c.terms, 1, c.rhs);
      if (c.op != Relation::LessEqual) add_row(c.terms, -1, c.rhs);
    }
    // Objective cutoff row: sum(c_j x_j) <= incumbent - 1.
    objective_row_ = static_cast<int>(rows_.size());
    Row obj{{}, kNoBound};
    for (int j = 0; j < n; ++j) {
      if (program.objective()[j] > 0) obj.terms.emplace_back(j, program.objective()[j]);
    }
    rows_.push_back(std::move(obj));

    occurs_.resize(n);
    min_activity_.assign(rows_.size(), 0);
    for (int r = 0; r < static_cast<int>(rows_.size()); ++r) {
      for (auto [j, a] : rows_[r].terms) {
        occurs_[j].emplace_back(r, a);
        min_activity_[r] += std::min(0L, a);
      }
    }
    value_.assign(n, -1);
    queued_.assign(rows_.size(), false);
    branch_order_ = make_branch_order();
  }

  // Starts from a known feasible assignment; only strictly better ones are
  // searched for.
  void seed_incumbent(const std::vector<bool>& assignment, long objective) {
    best_ = assignment;
    incumbent_ = objective;
    rows_[objective_row_].rhs = incumbent_ - 1;
  }

  SolveResult run(std::chrono::steady_clock::time_point start, std::optional<long> node_limit) {
    SolveResult result;
    bool stopped = false;

    for (int r = 0; r < static_cast<int>(rows_.size()); ++r) enqueue(r);
    bool alive = propagate();

    while (alive) {
      if (nodes_ % 1000 == 0) {
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start)
                                .count();
        if (secs >= options_.timeout_seconds) stopped = true;
      }
      if (node_limit && nodes_ >= *node_limit) stopped = true;
      if (stopped) break;

      const std::size_t cursor = frames_.empty() ? 0 : frames_.back().cursor;
      const std::size_t next = next_free(cursor);
      if (next == branch_order_.size()) {
        record_incumbent();
        if (incumbent_ == 0) break;
        alive = backtrack();
        continue;
      }
      ++nodes_;
      const int var = branch_order_[next];
      frames_.push_back({trail_.size(), var, next + 1, false, partial_});
      assign(var, 0);
      if (!propagate()) alive = backtrack();
    }

    result.elapsed_seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
    result.nodes = nodes_;
    const bool have = best_.has_value();
    if (have) {
      result.assignment = best_;
      result.objective_value = incumbent_;
    }
    if (!stopped) {
      result.status = have ? SolveStatus::Optimal : SolveStatus::Infeasible;
      result.best_lower_bound = have ? incumbent_ : 0;
      return result;
    }
    // Every unexplored subtree is rooted either at the current node or at a
    // pending 1-branch; their partial objectives bound all completions.
    long bound = have ? incumbent_ : kNoBound;
    if (alive) bound = std::min(bound, partial_);
    for (const auto& f : frames_) {
      if (!f.tried_one) {
        bound = std::min(bound, f.partial + program_.objective()[f.var]);
      }
    }
    if (bound == kNoBound) bound = 0;
    if (have && bound >= incumbent_) {
      result.status = SolveStatus::Optimal;
      result.best_lower_bound = incumbent_;
    } else {
      result.status =
          have ? SolveStatus::FeasibleTimeout : SolveStatus::NoSolutionTimeout;
      result.best_lower_bound = bound;
    }
    return result;
  }

 private:
  struct Frame {
    std::size_t trail_size;
    int var;
    std::size_t cursor;  // position after `var` in the branching order
    bool tried_one;
    long partial;  // objective of fixed variables before the decision
  };

  void add_row(const std::vector<Term>& terms, long sign, long rhs) {
    Row row{{}, sign * rhs};
    for (const auto& t : terms) {
      if (t.coefficient != 0) row.terms.emplace_back(t.var.index, sign * t.coefficient);
    }
    rows_.push_back(std::move(row));
  }

  std::vector<int> make_branch_order() const {
    const int n = static_cast<int>(program_.num_variables());
    std::vector<int> order(n);
    for (int j = 0; j < n; ++j) order[j] = j;
    if (branching_ == Branching::ObjectiveFirst) {
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return program_.objective()[a] > program_.objective()[b];
      });
    }
    if (options_.seed != 0) {
      std::mt19937_64 rng(options_.seed);
      auto priority = [&](int j) {
        return branching_ == Branching::ObjectiveFirst
                   ? program_.objective()[j]
                   : 0L;
      };
      for (std::size_t lo = 0; lo < order.size();) {
        std::size_t hi = lo;
        while (hi < order.size() && priority(order[hi]) == priority(order[lo])) ++hi;
        std::shuffle(order.begin() + lo, order.begin() + hi, rng);
        lo = hi;
      }
    }
    return order;
  }

  std::size_t next_free(std::size_t from) const {
    while (from < branch_order_.size() && value_[branch_order_[from]] >= 0) ++from;
    return from;
  }

  void enqueue(int r) {
    if (!queued_[r]) {
      queued_[r] = true;
      queue_.push_back(r);
    }
  }

  void assign(int var, int v) {
    value_[var] = static_cast<signed char>(v);
    trail_.push_back(var);
    if (v == 1) partial_ += program_.objective()[var];
    for (auto [r, a] : occurs_[var]) {
      const long delta = a * v - std::min(0L, a);
      if (delta != 0) {
        min_activity_[r] += delta;
        enqueue(r);
      }
    }
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      const int var = trail_.back();
      trail_.pop_back();
      const int v = value_[var];
      if (v == 1) partial_ -= program_.objective()[var];
      for (auto [r, a] : occurs_[var]) {
        min_activity_[r] -= a * v - std::min(0L, a);
      }
      value_[var] = -1;
    }
  }

  bool propagate() {
    bool ok = true;
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      const int r = queue_[qi];
      queued_[r] = false;
      if (!ok) continue;
      const long slack = rows_[r].rhs - min_activity_[r];
      if (slack < 0) {
        ok = false;
        continue;
      }
      for (auto [j, a] : rows_[r].terms) {
        if (value_[j] >= 0) continue;
        if (a > slack) {
          assign(j, 0);
        } else if (-a > slack) {
          assign(j, 1);
        }
      }
    }
    queue_.clear();
    return ok;
  }

  void record_incumbent() {
    if (partial_ >= incumbent_) return;
    incumbent_ = partial_;
    best_.emplace(value_.size());
    for (std::size_t j = 0; j < value_.size(); ++j) (*best_)[j] = value_[j] == 1;
    rows_[objective_row_].rhs = incumbent_ - 1;
  }

  // Moves to the next unexplored branch. False once the tree is exhausted.
  bool backtrack() {
    while (!frames_.empty()) {
      Frame& f = frames_.back();
      undo_to(f.trail_size);
      if (f.tried_one) {
        frames_.pop_back();
        continue;
      }
      f.tried_one = true;
      assign(f.var, 1);
      enqueue(objective_row_);
      if (propagate()) return true;
    }
    return false;
  }

  const BinaryProgram& program_;
  const SolveOptions& options_;
  Branching branching_;
  std::vector<Row> rows_;
  int objective_row_ = 0;
  std::vector<std::vector<std::pair<int, long>>> occurs_;
  std::vector<long> min_activity_;
  std::vector<signed char> value_;
  std::vector<int> trail_;
  std::vector<int> queue_;
  std::vector<bool> queued_;
  std::vector<int> branch_order_;
  std::vector<Frame> frames_;
  long partial_ = 0;
  long incumbent_ = kNoBound;
  std::optional<std::vector<bool>> best_;
  long nodes_ = 0;
};

}  // namespace

VarId BinaryProgram::add_variable(std::string name) {
  if (!valid_name(name)) {
    throw std::invalid_argument(fmt::format("invalid variable name \"{}\"", name));
  }
  const int index = static_cast<int>(names_.size());
  if (!by_name_.emplace(name, index).second) {
    throw std::invalid_argument(fmt::format("duplicate variable \"{}\"", name));
  }
  names_.push_back(std::move(name));
  objective_.push_back(0);
  return VarId{index};
}

void BinaryProgram::check_var(VarId v) const {
  if (v.index < 0 || v.index >= static_cast<int>(names_.size())) {
    throw std::invalid_argument(fmt::format("undeclared variable #{}", v.index));
  }
}

void BinaryProgram::add_constraint(std::vector<Term> terms, Relation op,
                                   long rhs) {
  if (terms.empty()) throw std::invalid_argument("constraint without terms");
  std::vector<int> seen;
  for (const auto& t : terms) {
    check_var(t.var);
    seen.push_back(t.var.index);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("variable repeated within a constraint");
  }
  constraints_.push_back({std::move(terms), op, rhs});
}

void BinaryProgram::add_objective(long coefficient, VarId var) {
  check_var(var);
  const long updated = objective_[var.index] + coefficient;
  if (updated < 0) {
    throw std::invalid_argument("objective coefficients must be non-negative");
  }
  objective_[var.index] = updated;
}

std::optional<VarId> BinaryProgram::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return VarId{it->second};
}

long BinaryProgram::evaluate(const std::vector<bool>& assignment) const {
  long total = 0;
  for (std::size_t j = 0; j < objective_.size(); ++j) {
    if (assignment.at(j)) total += objective_[j];
  }
  return total;
}

bool BinaryProgram::satisfies(const std::vector<bool>& assignment) const {
  for (const auto& c : constraints_) {
    long lhs = 0;
    for (const auto& t : c.terms) {
      if (assignment.at(t.var.index)) lhs += t.coefficient;
    }
    switch (c.op) {
      case Relation::LessEqual:
        if (lhs > c.rhs) return false;
        break;
      case Relation::GreaterEqual:
        if (lhs < c.rhs) return false;
        break;
      case Relation::Equal:
        if (lhs != c.rhs) return false;
        break;
    }
  }
  return true;
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::FeasibleTimeout:
      return "feasible-timeout";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::NoSolutionTimeout:
      return "no-solution-timeout";
  }
  return "unknown";
}

std::optional<double> SolveResult::gap() const {
  if (!assignment || objective_value <= 0) return std::nullopt;
  return static_cast<double>(objective_value - best_lower_bound) /
         static_cast<double>(objective_value);
}

SolveResult solve(const BinaryProgram& program, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  std::optional<SolveResult> warm;
  if (options.warm_start_nodes > 0 && options.branching != Branching::DeclarationOrder) {
    std::optional<long> limit = options.warm_start_nodes;
    if (options.node_limit) limit = std::min(*limit, *options.node_limit);
    Search dive(program, options, Branching::DeclarationOrder);
    warm = dive.run(start, limit);
    // A dive that finishes has settled the program either way.
    if (warm->status == SolveStatus::Optimal || warm->status == SolveStatus::Infeasible) {
      return *warm;
    }
  }
  Search search(program, options, options.branching);
  if (warm && warm->assignment) search.seed_incumbent(*warm->assignment, warm->objective_value);
  auto result = search.run(start, options.node_limit);
  if (warm) result.nodes += warm->nodes;
  return result;
}

}  // namespace storyweave::bip
