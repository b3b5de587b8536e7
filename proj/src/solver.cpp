#include "ctg/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "ctg/money.hpp"

namespace ctg {

namespace {

constexpr double kTieEps = 1e-9;

struct Problem {
  const GroupCatalog* catalog;
  bool minimize;
  std::vector<int> allowed;                    // catalog indices, ascending
  std::vector<double> cost;                    // aligned with allowed
  std::vector<std::vector<int>> member_of;     // aligned with allowed
  std::vector<std::vector<int>> rider_groups;  // rider -> positions in allowed
  std::vector<std::vector<int>> excluded_with; // position -> positions
};

Problem build_problem(const SolveSpec& spec) {
  if (!spec.catalog) throw error("solve spec has no catalog");
  const auto& catalog = *spec.catalog;
  Problem p;
  p.catalog = &catalog;
  p.minimize = spec.objective == Objective::minimize;
  p.allowed = spec.allowed_groups;
  if (p.allowed.empty()) {
    p.allowed.resize(catalog.size());
    for (int i = 0; i < catalog.size(); ++i) p.allowed[i] = i;
  } else {
    std::sort(p.allowed.begin(), p.allowed.end());
    p.allowed.erase(std::unique(p.allowed.begin(), p.allowed.end()), p.allowed.end());
  }

  std::vector<int> position(catalog.size(), -1);
  for (size_t pos = 0; pos < p.allowed.size(); ++pos) {
    position[p.allowed[pos]] = static_cast<int>(pos);
  }

  p.cost.reserve(p.allowed.size());
  p.member_of.reserve(p.allowed.size());
  p.rider_groups.assign(catalog.n_riders(), {});
  for (size_t pos = 0; pos < p.allowed.size(); ++pos) {
    const auto& g = catalog[p.allowed[pos]];
    p.cost.push_back(g.total_cost);
    p.member_of.push_back(g.members);
    for (int rider : g.members) p.rider_groups[rider].push_back(static_cast<int>(pos));
  }

  p.excluded_with.assign(p.allowed.size(), {});
  for (const auto& [a, b] : spec.exclusions) {
    if (a < 0 || a >= catalog.size() || b < 0 || b >= catalog.size()) {
      throw error("exclusion pair references an unknown group");
    }
    const int pa = position[a];
    const int pb = position[b];
    if (pa < 0 || pb < 0) continue;  // pair involves a pruned group
    p.excluded_with[pa].push_back(pb);
    p.excluded_with[pb].push_back(pa);
  }
  return p;
}

struct Incumbent {
  bool found = false;
  double value = 0.0;
  std::vector<int> selected;  // catalog indices, ascending

  // Strictly better objective wins; within the tie tolerance the
  // lexicographically smaller index set wins.
  void offer(double value_in, std::vector<int> selected_in, bool minimize) {
    std::sort(selected_in.begin(), selected_in.end());
    if (!found) {
      found = true;
      value = value_in;
      selected = std::move(selected_in);
      return;
    }
    const double delta = minimize ? value - value_in : value_in - value;
    if (delta > kTieEps || (std::fabs(value_in - value) <= kTieEps && selected_in < selected)) {
      value = value_in;
      selected = std::move(selected_in);
    }
  }
};

}  // namespace

namespace {

// Shared search state for the exact solver.
struct Search {
  const Problem& p;
  int n;
  int m;
  std::vector<bool> covered;
  std::vector<int> banned;  // count of chosen groups excluding this one
  std::vector<bool> chosen_flag;
  std::vector<int> chosen_catalog;
  Incumbent incumbent;
  long long nodes = 0;

  explicit Search(const Problem& problem)
      : p(problem),
        n(problem.catalog->n_riders()),
        m(static_cast<int>(problem.allowed.size())),
        covered(n, false),
        banned(m, 0),
        chosen_flag(m, false) {}

  struct NodeInfo {
    bool dead = false;       // some uncovered rider has no available group
    double bound = 0.0;      // objective bound over the uncovered riders
    int branch_rider = -1;   // most-constrained uncovered rider
    std::vector<int> candidates;  // available groups covering branch_rider
  };

  // Collects availability, picks the branching rider, and bounds the node
  // with a few rounds of LP dual ascent: covering dual (sum y_r with
  // sum_{r in G} y_r <= c(G)) lower-bounds the minimum, packing dual
  // (sum y_r with sum_{r in G} y_r >= c(G)) upper-bounds the maximum.
  NodeInfo inspect(double current) {
    NodeInfo info;
    std::vector<int> avail;
    std::vector<std::vector<int>> rider_avail(n);
    for (int pos = 0; pos < m; ++pos) {
      if (banned[pos] > 0 || chosen_flag[pos]) continue;
      bool available = true;
      for (int rider : p.member_of[pos]) {
        if (covered[rider]) {
          available = false;
          break;
        }
      }
      if (!available) continue;
      avail.push_back(pos);
      for (int rider : p.member_of[pos]) rider_avail[rider].push_back(pos);
    }

    std::vector<int> uncovered;
    for (int rider = 0; rider < n; ++rider) {
      if (covered[rider]) continue;
      if (rider_avail[rider].empty()) {
        info.dead = true;
        return info;
      }
      uncovered.push_back(rider);
      if (info.branch_rider < 0 ||
          rider_avail[rider].size() < rider_avail[info.branch_rider].size()) {
        info.branch_rider = rider;
      }
    }
    if (info.branch_rider < 0) {
      info.bound = current;
      return info;
    }

    std::vector<double> y(n, 0.0);
    std::vector<double> group_sum(m, 0.0);
    if (p.minimize) {
      // Start at zero duals, raise each rider to the tightest slack.
      std::vector<double> slack(m);
      for (int pos : avail) slack[pos] = p.cost[pos];
      for (int round = 0; round < 3; ++round) {
        bool moved = false;
        for (int rider : uncovered) {
          double delta = std::numeric_limits<double>::infinity();
          for (int pos : rider_avail[rider]) delta = std::min(delta, slack[pos]);
          if (delta <= 1e-12) continue;
          y[rider] += delta;
          for (int pos : rider_avail[rider]) slack[pos] -= delta;
          moved = true;
        }
        if (!moved) break;
      }
    } else {
      // Start at per-rider maximal rates (feasible) and lower greedily.
      for (int rider : uncovered) {
        double rate = 0.0;
        for (int pos : rider_avail[rider]) {
          rate = std::max(rate, p.cost[pos] / static_cast<double>(p.member_of[pos].size()));
        }
        y[rider] = rate;
      }
      for (int pos : avail) {
        for (int rider : p.member_of[pos]) group_sum[pos] += y[rider];
      }
      for (int round = 0; round < 3; ++round) {
        bool moved = false;
        for (int rider : uncovered) {
          double need = 0.0;
          for (int pos : rider_avail[rider]) {
            need = std::max(need, p.cost[pos] - (group_sum[pos] - y[rider]));
          }
          if (need < y[rider] - 1e-12) {
            const double delta = y[rider] - need;
            y[rider] = need;
            for (int pos : rider_avail[rider]) group_sum[pos] -= delta;
            moved = true;
          }
        }
        if (!moved) break;
      }
    }
    info.bound = current;
    for (int rider : uncovered) info.bound += y[rider];

    info.candidates = rider_avail[info.branch_rider];
    // Promising groups first so the incumbent tightens early.
    std::stable_sort(info.candidates.begin(), info.candidates.end(), [&](int a, int b) {
      const double sa = p.cost[a] / static_cast<double>(p.member_of[a].size());
      const double sb = p.cost[b] / static_cast<double>(p.member_of[b].size());
      return p.minimize ? sa < sb : sa > sb;
    });
    return info;
  }

  void choose(int pos) {
    for (int r : p.member_of[pos]) covered[r] = true;
    for (int other : p.excluded_with[pos]) ++banned[other];
    chosen_flag[pos] = true;
    chosen_catalog.push_back(p.allowed[pos]);
  }

  void unchoose(int pos) {
    chosen_catalog.pop_back();
    chosen_flag[pos] = false;
    for (int other : p.excluded_with[pos]) --banned[other];
    for (int r : p.member_of[pos]) covered[r] = false;
  }

  // Quick feasible solution to seed the incumbent: repeatedly cover the
  // most-constrained rider with its extreme-share group. Dead ends just
  // abandon the seed.
  void seed() {
    std::vector<int> taken;
    while (true) {
      NodeInfo info = inspect(0.0);
      if (info.dead) break;
      if (info.branch_rider < 0) {
        double total = 0.0;
        for (int pos : taken) total += p.cost[pos];
        incumbent.offer(total, chosen_catalog, p.minimize);
        break;
      }
      choose(info.candidates.front());
      taken.push_back(info.candidates.front());
    }
    for (auto it = taken.rbegin(); it != taken.rend(); ++it) unchoose(*it);
  }

  void descend(double current) {
    ++nodes;
    NodeInfo info = inspect(current);
    if (info.dead) return;
    if (info.branch_rider < 0) {
      incumbent.offer(current, chosen_catalog, p.minimize);
      return;
    }
    if (incumbent.found) {
      if (p.minimize && info.bound > incumbent.value + kTieEps) return;
      if (!p.minimize && info.bound < incumbent.value - kTieEps) return;
    }
    for (int pos : info.candidates) {
      choose(pos);
      descend(current + p.cost[pos]);
      unchoose(pos);
    }
  }
};

}  // namespace

SolveResult solve(const SolveSpec& spec) {
  const auto start_time = std::chrono::steady_clock::now();
  Problem p = build_problem(spec);
  Search search(p);
  search.seed();
  search.descend(0.0);

  SolveResult result;
  result.nodes_explored = search.nodes;
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  if (search.incumbent.found) {
    result.status = SolveStatus::optimal;
    result.matching.selected = search.incumbent.selected;
    result.objective_value = search.incumbent.value;
  }
  return result;
}

SolveResult brute_force_solve(const SolveSpec& spec, int max_riders) {
  const auto start_time = std::chrono::steady_clock::now();
  Problem p = build_problem(spec);
  const int n = p.catalog->n_riders();
  if (n > max_riders) {
    throw instance_too_large_error("brute force is guarded at " + std::to_string(max_riders) +
                                   " riders");
  }

  Incumbent incumbent;
  long long nodes = 0;
  std::vector<bool> covered(n, false);
  std::vector<int> chosen_pos;

  std::function<void()> descend = [&]() {
    ++nodes;
    int rider = 0;
    while (rider < n && covered[rider]) ++rider;
    if (rider == n) {
      // Exclusions are checked only on complete partitions, on purpose: this
      // keeps the oracle independent of the propagation logic in solve().
      for (size_t i = 0; i < chosen_pos.size(); ++i) {
        for (int other : p.excluded_with[chosen_pos[i]]) {
          for (size_t j = 0; j < chosen_pos.size(); ++j) {
            if (chosen_pos[j] == other) return;
          }
        }
      }
      double total = 0.0;
      std::vector<int> selected;
      for (int pos : chosen_pos) {
        total += p.cost[pos];
        selected.push_back(p.allowed[pos]);
      }
      incumbent.offer(total, std::move(selected), p.minimize);
      return;
    }
    for (int pos : p.rider_groups[rider]) {
      bool free = true;
      for (int r : p.member_of[pos]) {
        if (covered[r]) {
          free = false;
          break;
        }
      }
      if (!free) continue;
      for (int r : p.member_of[pos]) covered[r] = true;
      chosen_pos.push_back(pos);
      descend();
      chosen_pos.pop_back();
      for (int r : p.member_of[pos]) covered[r] = false;
    }
  };
  descend();

  SolveResult result;
  result.nodes_explored = nodes;
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  if (incumbent.found) {
    result.status = SolveStatus::optimal;
    result.matching.selected = incumbent.selected;
    result.objective_value = incumbent.value;
  }
  return result;
}

SolveSpec constrained_spec(const CostShareTable& table, EquilibriumNotion notion,
                           Objective objective) {
  const auto& catalog = table.catalog();
  SolveSpec spec;
  spec.catalog = &catalog;
  spec.objective = objective;
  switch (notion) {
    case EquilibriumNotion::TNE:
      spec.allowed_groups = tne_groups(table);
      break;
    case EquilibriumNotion::RHE: {
      for (int g = 0; g < catalog.size(); ++g) {
        if (is_hermetic(catalog[g].members, table)) spec.allowed_groups.push_back(g);
      }
      break;
    }
    case EquilibriumNotion::RUE: {
      spec.allowed_groups = tne_groups(table);
      spec.exclusions = mergeable_pairs(table, spec.allowed_groups).pairs;
      break;
    }
    case EquilibriumNotion::RSIE: {
      // Empty-receiver moves are the TNE condition, folded into the group
      // filter; the exclusion list keeps only genuine two-group pairs.
      spec.allowed_groups = tne_groups(table);
      std::vector<bool> allowed(catalog.size(), false);
      for (int g : spec.allowed_groups) allowed[g] = true;
      for (const auto& [a, b] : individually_unstable_pairs(table).pairs) {
        if (allowed[a] && allowed[b]) spec.exclusions.emplace_back(a, b);
      }
      break;
    }
    case EquilibriumNotion::TSE:
      throw error("no ILP formulation for TSE; use the exhaustive search");
  }
  return spec;
}

PosPoaResult pos_poa(const CostShareTable& table, EquilibriumNotion notion) {
  const auto& catalog = table.catalog();
  PosPoaResult out;

  SolveSpec unconstrained;
  unconstrained.catalog = &catalog;
  unconstrained.objective = Objective::minimize;
  out.optimum = solve(unconstrained);

  SolveSpec best_spec = constrained_spec(table, notion, Objective::minimize);
  out.best = solve(best_spec);
  SolveSpec worst_spec = best_spec;
  worst_spec.objective = Objective::maximize;
  out.worst = solve(worst_spec);

  if (out.optimum.status == SolveStatus::optimal && out.optimum.objective_value > 0.0) {
    if (out.best.status == SolveStatus::optimal) {
      out.pos = out.best.objective_value / out.optimum.objective_value;
    }
    if (out.worst.status == SolveStatus::optimal) {
      out.poa = out.worst.objective_value / out.optimum.objective_value;
    }
  }
  return out;
}

}  // namespace ctg
