#pragma once

// Independent oracles for cross-checking the production code paths. These
// are deliberately written against the definitions, not the implementations:
// plain permutation scans, memoized recursion, iterated argmins.

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ctg/core.hpp"
#include "ctg/feasibility.hpp"
#include "ctg/money.hpp"
#include "ctg/protocols.hpp"

namespace ctg::testsupport {

// Cheapest route cost by scanning every permutation of the 2k stops with
// std::next_permutation and filtering invalid orders.
inline double brute_force_route_cost(const Members& members,
                                     const std::vector<TripRequest>& requests,
                                     const CostParams& cost, const FeasibilityParams& params) {
  struct Item {
    int rider;
    bool is_origin;
  };
  std::vector<int> slots;  // 2k slots over members, value = member position * 2 + kind
  for (size_t i = 0; i < members.size(); ++i) {
    slots.push_back(static_cast<int>(2 * i));
    slots.push_back(static_cast<int>(2 * i + 1));
  }
  std::sort(slots.begin(), slots.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    std::vector<Item> order;
    for (int s : slots) order.push_back(Item{members[s / 2], s % 2 == 0});
    bool valid = true;
    std::set<int> boarded;
    for (const auto& item : order) {
      if (item.is_origin) {
        boarded.insert(item.rider);
      } else if (!boarded.count(item.rider)) {
        valid = false;
        break;
      }
    }
    if (!valid) continue;

    Vec2 pos = requests[order.front().rider].origin;
    double t = requests[order.front().rider].depart_at / 3600.0;
    double length = 0.0;
    std::map<int, double> board, alight;
    for (const auto& item : order) {
      const auto& req = requests[item.rider];
      const Vec2 target = item.is_origin ? req.origin : req.destination;
      const double leg = distance_km(pos, target, params.metric);
      length += leg;
      t += leg / params.speed_kmh;
      if (item.is_origin) {
        t = std::max(t, req.depart_at / 3600.0);
        board[item.rider] = t;
      } else {
        alight[item.rider] = t;
      }
      pos = target;
    }
    double total = cost.beta_l * length + cost.beta_v;
    for (int rider : members) {
      total += cost.beta_t * (alight.at(rider) - board.at(rider));
      total += cost.beta_w * (board.at(rider) - requests[rider].depart_at / 3600.0);
    }
    best = std::min(best, total);
  } while (std::next_permutation(slots.begin(), slots.end()));
  return best;
}

// Memoized top-down feasibility over all subsets: feasible iff all proper
// one-smaller subsets are feasible and nobody exceeds the detour bound.
class ExhaustiveFeasibility {
 public:
  ExhaustiveFeasibility(const std::vector<TripRequest>& requests, const CostParams& cost,
                        const FeasibilityParams& params)
      : requests_(requests), cost_(cost), params_(params) {
    for (const auto& req : requests) {
      const Route solo = optimal_route({req.id}, requests, cost, params);
      solo_direct_[req.id] = direct_user_cost(solo, req.id, cost);
    }
  }

  bool feasible(const Members& members) {
    auto it = memo_.find(members);
    if (it != memo_.end()) return it->second;
    bool ok = true;
    if (members.size() > 1) {
      for (size_t drop = 0; drop < members.size() && ok; ++drop) {
        Members sub = members;
        sub.erase(sub.begin() + drop);
        ok = feasible(sub);
      }
      if (ok) {
        const Route route = optimal_route(members, requests_, cost_, params_);
        for (int rider : members) {
          if (!money::leq(direct_user_cost(route, rider, cost_),
                          params_.detour_factor * solo_direct_.at(rider))) {
            ok = false;
            break;
          }
        }
      }
    }
    memo_[members] = ok;
    return ok;
  }

  // All feasible member sets of size <= capacity.
  std::set<Members> all_feasible(int n) {
    std::set<Members> out;
    std::vector<Members> frontier;
    for (int i = 0; i < n; ++i) {
      out.insert({i});
      frontier.push_back({i});
    }
    for (int size = 2; size <= params_.capacity; ++size) {
      std::set<Members> next;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != size) continue;
        Members members;
        for (int b = 0; b < n; ++b) {
          if (mask & (1u << b)) members.push_back(b);
        }
        if (feasible(members)) next.insert(members);
      }
      for (const auto& m : next) out.insert(m);
    }
    return out;
  }

 private:
  const std::vector<TripRequest>& requests_;
  CostParams cost_;
  FeasibilityParams params_;
  std::map<int, double> solo_direct_;
  std::map<Members, bool> memo_;
};

// Iterated argmin over *all* remaining subsets each round, the literal
// reading of the subgroup pricing loop.
inline SubgroupDecomposition subgroup_decompose_oracle(const Members& members,
                                                       const GroupCatalog& catalog) {
  SubgroupDecomposition out;
  Members remaining = members;
  while (!remaining.empty()) {
    std::optional<Members> best;
    double best_avg = 0.0;
    for_each_subset(remaining, true, [&](const Members& h) {
      if (!catalog.contains(h)) return;
      const double avg = catalog.total_cost(h) / static_cast<double>(h.size());
      if (!best || avg < best_avg ||
          (avg == best_avg && (h.size() > best->size() ||
                               (h.size() == best->size() && h < *best)))) {
        best = h;
        best_avg = avg;
      }
    });
    for (int rider : *best) {
      out.z[rider] = best_avg;
      out.phi[rider] = *best;
    }
    out.ordered_parts.emplace_back(*best, best_avg);
    remaining = set_difference(remaining, *best);
  }
  double z_sum = 0.0;
  for (int rider : members) z_sum += out.z.at(rider);
  out.excess = catalog.total_cost(members) - z_sum;
  return out;
}

// TSE oracle: a matching is blocked iff some feasible group, not selected
// as-is, makes every one of its members strictly better off.
inline bool has_blocking_coalition(const Matching& m, const CostShareTable& table) {
  const auto& catalog = table.catalog();
  std::vector<int> assigned(catalog.n_riders(), -1);
  for (int g : m.selected) {
    for (int rider : catalog[g].members) assigned[rider] = g;
  }
  for (int g = 0; g < catalog.size(); ++g) {
    bool as_is = true;
    for (int rider : catalog[g].members) {
      if (assigned[rider] != g) as_is = false;
    }
    if (as_is) continue;
    bool all_strictly_better = true;
    for (int rider : catalog[g].members) {
      if (!money::lt(table.share(g, rider), table.share(assigned[rider], rider))) {
        all_strictly_better = false;
        break;
      }
    }
    if (all_strictly_better) return true;
  }
  return false;
}

}  // namespace ctg::testsupport
