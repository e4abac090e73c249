// Exact 0/1 integer programming: model builder, depth-first branch and bound
// with bound propagation, and CPLEX-style LP text import/export.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace storyweave::bip {

struct VarId {
  int index = -1;

  friend constexpr auto operator<=>(VarId, VarId) = default;
};

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Term {
  long coefficient;
  VarId var;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Relation op;
  long rhs;
};

/// Minimize a non-negative linear objective over binary variables subject to
/// integer linear constraints.
class BinaryProgram {
 public:
  /// Names must be unique and match [A-Za-z0-9_]+. Throws
  /// std::invalid_argument otherwise.
  VarId add_variable(std::string name);

  /// Throws std::invalid_argument on an empty term list, an undeclared
  /// variable, or a variable repeated within the constraint.
  void add_constraint(std::vector<Term> terms, Relation op, long rhs);

  /// Adds `coefficient` to the objective coefficient of `var`. Coefficients
  /// must stay non-negative.
  void add_objective(long coefficient, VarId var);

  std::size_t num_variables() const { return names_.size(); }
  const std::string& name(VarId v) const { return names_.at(v.index); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<VarId> find(std::string_view name) const;

  const std::vector<LinearConstraint>& constraints() const {
    return constraints_;
  }
  /// Objective coefficient per variable (dense, zero when absent).
  const std::vector<long>& objective() const { return objective_; }

  long evaluate(const std::vector<bool>& assignment) const;
  bool satisfies(const std::vector<bool>& assignment) const;

 private:
  void check_var(VarId v) const;

  std::vector<std::string> names_;
  std::unordered_map<std::string, int> by_name_;
  std::vector<LinearConstraint> constraints_;
  std::vector<long> objective_;
};

enum class SolveStatus {
  Optimal,
  FeasibleTimeout,
  Infeasible,
  /// Stopped by the time or node limit before any feasible assignment.
  NoSolutionTimeout,
};

std::string_view to_string(SolveStatus status);

enum class Branching {
  /// Highest objective coefficient first, then declaration index.
  ObjectiveFirst,
  /// Declaration index only.
  DeclarationOrder,
};

struct SolveOptions {
  double timeout_seconds = 3600;
  /// Shuffles the branching order among variables of equal priority; 0 keeps
  /// index order.
  std::uint64_t seed = 0;
  Branching branching = Branching::ObjectiveFirst;
  /// Optional cap on branching decisions; hitting it behaves like a timeout.
  std::optional<long> node_limit;
  /// Before the main search, dive in declaration order for at most this many
  /// nodes to find a first incumbent. 0 disables the dive.
  long warm_start_nodes = 20000;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<std::vector<bool>> assignment;
  long objective_value = 0;
  long best_lower_bound = 0;
  double elapsed_seconds = 0;
  long nodes = 0;

  /// (UB - LB) / UB in [0, 1]; nullopt without an incumbent or when UB = 0.
  std::optional<double> gap() const;
};

SolveResult solve(const BinaryProgram& program, const SolveOptions& options = {});

/// CPLEX LP text with Minimize / Subject To / Binary / End sections.
std::string export_lp(const BinaryProgram& program);

/// Reads the subset of the LP format written by export_lp. Throws
/// std::invalid_argument with a line number on malformed input.
BinaryProgram parse_lp(std::string_view text);

}  // namespace storyweave::bip
