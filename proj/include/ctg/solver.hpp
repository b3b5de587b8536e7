#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ctg/core.hpp"
#include "ctg/equilibria.hpp"

namespace ctg {

enum class Objective { minimize, maximize };

struct SolveSpec {
  const GroupCatalog* catalog = nullptr;
  Objective objective = Objective::minimize;
  std::vector<int> allowed_groups;              // empty means the whole catalog
  std::vector<std::pair<int, int>> exclusions;  // co-selection bans
};

enum class SolveStatus { optimal, infeasible };

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  Matching matching;
  double objective_value = 0.0;
  long long nodes_explored = 0;
  double wall_time_seconds = 0.0;
};

// Exact branch-and-bound over group selection: branch on the lowest
// uncovered rider, bound with per-rider extreme cost shares among the groups
// still available, propagate exclusion bans at branch time. Ties between
// co-optimal matchings resolve to the lexicographically smallest selected
// index set.
SolveResult solve(const SolveSpec& spec);

// Exhaustive partition enumeration, exclusions checked on complete
// matchings. Oracle for solve(); guarded by max_riders.
SolveResult brute_force_solve(const SolveSpec& spec, int max_riders = 12);

struct PosPoaResult {
  SolveResult optimum;  // unconstrained minimum
  SolveResult best;     // constrained minimum
  SolveResult worst;    // constrained maximum
  std::optional<double> pos;
  std::optional<double> poa;
};

// Constrained problems per notion: TNE/RHE restrict the group set, RUE/RSIE
// additionally carry pairwise exclusion constraints on top of their base
// sets. RSIE problems may be infeasible.
PosPoaResult pos_poa(const CostShareTable& table, EquilibriumNotion notion);

// The constrained spec pos_poa solves, exposed for reuse by the CLI.
SolveSpec constrained_spec(const CostShareTable& table, EquilibriumNotion notion,
                           Objective objective);

}  // namespace ctg
