#include "ctg/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ctg/money.hpp"

namespace ctg {

namespace {

constexpr double kSecondsPerHour = 3600.0;

struct StopKey {
  int rider;
  StopKind kind;
  bool operator<(const StopKey& o) const {
    if (rider != o.rider) return rider < o.rider;
    return static_cast<int>(kind) < static_cast<int>(o.kind);
  }
  bool operator==(const StopKey& o) const = default;
};

struct RouteEval {
  Route route;
  double cost = std::numeric_limits<double>::infinity();
  std::vector<StopKey> sequence;
};

// Simulates a stop sequence and prices it: user time costs plus operator cost.
RouteEval evaluate_sequence(const std::vector<StopKey>& sequence,
                            const std::vector<TripRequest>& requests,
                            const CostParams& cost, const FeasibilityParams& params) {
  RouteEval eval;
  eval.sequence = sequence;
  Route& route = eval.route;

  std::map<int, double> board, alight;
  Vec2 pos = requests[sequence.front().rider].origin;
  const double start = requests[sequence.front().rider].depart_at / kSecondsPerHour;
  double t = start;
  for (const auto& key : sequence) {
    const auto& req = requests[key.rider];
    const Vec2 target = key.kind == StopKind::origin ? req.origin : req.destination;
    const double leg = distance_km(pos, target, params.metric);
    route.length_km += leg;
    t += leg / params.speed_kmh;
    if (key.kind == StopKind::origin) {
      const double depart = req.depart_at / kSecondsPerHour;
      if (t < depart) t = depart;  // hold for the rider
      board[key.rider] = t;
    } else {
      alight[key.rider] = t;
    }
    route.stops.push_back(Stop{key.rider, key.kind, target, t});
    pos = target;
  }

  double user_cost = 0.0;
  for (const auto& [rider, b] : board) {
    const double depart = requests[rider].depart_at / kSecondsPerHour;
    route.wait_hours[rider] = b - depart;
    route.ride_hours[rider] = alight.at(rider) - b;
    user_cost += cost.beta_t * route.ride_hours[rider] + cost.beta_w * route.wait_hours[rider];
  }
  route.duration_hours = t - start;
  eval.cost = user_cost + cost.beta_l * route.length_km + cost.beta_v;
  return eval;
}

void enumerate_sequences(const Members& members, std::vector<StopKey>& prefix,
                         std::vector<bool>& picked_origin, std::vector<bool>& picked_dest,
                         const std::vector<TripRequest>& requests, const CostParams& cost,
                         const FeasibilityParams& params, RouteEval& best) {
  const size_t k = members.size();
  if (prefix.size() == 2 * k) {
    RouteEval eval = evaluate_sequence(prefix, requests, cost, params);
    // Candidates are generated in lexicographic order, so a strict compare
    // keeps the lexicographically first sequence among cost ties.
    if (eval.cost < best.cost - 1e-12) best = std::move(eval);
    return;
  }
  for (size_t i = 0; i < k; ++i) {
    if (!picked_origin[i]) {
      picked_origin[i] = true;
      prefix.push_back(StopKey{members[i], StopKind::origin});
      enumerate_sequences(members, prefix, picked_origin, picked_dest, requests, cost,
                          params, best);
      prefix.pop_back();
      picked_origin[i] = false;
    } else if (!picked_dest[i]) {
      picked_dest[i] = true;
      prefix.push_back(StopKey{members[i], StopKind::destination});
      enumerate_sequences(members, prefix, picked_origin, picked_dest, requests, cost,
                          params, best);
      prefix.pop_back();
      picked_dest[i] = false;
    }
  }
}

}  // namespace

Route optimal_route(const Members& members, const std::vector<TripRequest>& requests,
                    const CostParams& cost, const FeasibilityParams& params) {
  if (members.empty()) throw error("cannot route an empty group");
  if (static_cast<int>(members.size()) > params.capacity) {
    throw error("group " + members_to_string(members) + " exceeds capacity");
  }
  RouteEval best;
  std::vector<StopKey> prefix;
  std::vector<bool> picked_origin(members.size(), false), picked_dest(members.size(), false);
  enumerate_sequences(members, prefix, picked_origin, picked_dest, requests, cost, params,
                      best);
  return best.route;
}

double direct_user_cost(const Route& route, int rider, const CostParams& cost) {
  auto wit = route.wait_hours.find(rider);
  auto tit = route.ride_hours.find(rider);
  if (wit == route.wait_hours.end() || tit == route.ride_hours.end()) {
    throw rider_not_in_group_error("rider " + std::to_string(rider) + " not on route");
  }
  return cost.beta_t * tit->second + cost.beta_w * wit->second;
}

double operator_cost(const Route& route, const CostParams& cost) {
  return cost.beta_l * route.length_km + cost.beta_v;
}

Group make_group(Members members, const std::vector<TripRequest>& requests,
                 const CostParams& cost, const FeasibilityParams& params) {
  Group g;
  g.route = optimal_route(members, requests, cost, params);
  g.members = std::move(members);
  double direct_sum = 0.0;
  for (int rider : g.members) {
    g.direct_costs[rider] = direct_user_cost(g.route, rider, cost);
    direct_sum += g.direct_costs[rider];
  }
  g.operator_cost = operator_cost(g.route, cost);
  g.societal_cost = cost.c_s;
  g.total_cost = direct_sum + g.operator_cost + g.societal_cost;
  return g;
}

GroupCatalog enumerate_feasible_groups(const std::vector<TripRequest>& requests,
                                       const CostParams& cost,
                                       const FeasibilityParams& params) {
  validate_requests(requests);
  const int n = static_cast<int>(requests.size());

  GroupCatalog catalog(n);
  std::vector<double> solo_direct(n);
  std::vector<Members> previous_level;
  for (int i = 0; i < n; ++i) {
    Group g = make_group(Members{i}, requests, cost, params);
    solo_direct[i] = g.direct_costs.at(i);
    previous_level.push_back(g.members);
    catalog.add(std::move(g));
  }

  for (int size = 2; size <= params.capacity && !previous_level.empty(); ++size) {
    std::set<Members> candidates;
    for (const auto& base : previous_level) {
      for (int rider = 0; rider < n; ++rider) {
        if (std::binary_search(base.begin(), base.end(), rider)) continue;
        candidates.insert(set_union(base, Members{rider}));
      }
    }
    std::vector<Members> level;
    for (const auto& members : candidates) {
      bool all_subsets_feasible = true;
      for (size_t drop = 0; drop < members.size() && all_subsets_feasible; ++drop) {
        Members sub = members;
        sub.erase(sub.begin() + drop);
        all_subsets_feasible = catalog.contains(sub);
      }
      if (!all_subsets_feasible) continue;

      Group g = make_group(members, requests, cost, params);
      bool within_detour = true;
      for (int rider : members) {
        if (!money::leq(g.direct_costs.at(rider),
                        params.detour_factor * solo_direct[rider])) {
          within_detour = false;
          break;
        }
      }
      if (!within_detour) continue;
      level.push_back(members);
      catalog.add(std::move(g));
    }
    previous_level = std::move(level);
  }

  return close_under_subsets(catalog);
}

GroupCatalog close_under_subsets(const GroupCatalog& catalog) {
  for (int rider = 0; rider < catalog.n_riders(); ++rider) {
    if (!catalog.contains(Members{rider})) {
      throw error("closure requires all singletons; missing {" + std::to_string(rider) + "}");
    }
  }

  // Missing subsets, each priced at the cheapest original group strictly
  // containing it. Tie order: cost, then size, then members.
  std::map<Members, int> insert_from;
  for (const auto& g : catalog.groups()) {
    for_each_subset(g.members, false, [&](const Members& h) {
      if (catalog.contains(h)) return;
      int best = -1;
      for (int cand = 0; cand < catalog.size(); ++cand) {
        const auto& other = catalog[cand];
        if (other.size() <= static_cast<int>(h.size())) continue;
        if (!is_subset(h, other.members)) continue;
        if (best < 0) {
          best = cand;
          continue;
        }
        const auto& cur = catalog[best];
        auto key = [](const Group& x) {
          return std::make_tuple(x.total_cost, x.size(), x.members);
        };
        if (key(other) < key(cur)) best = cand;
      }
      insert_from.emplace(h, best);
    });
  }

  auto derive_from = [](const Members& members, const Group& source) {
    Group g;
    g.members = members;
    g.total_cost = source.total_cost;
    g.societal_cost = source.societal_cost;
    g.closure_inserted = true;
    double direct_sum = 0.0;
    for (int rider : members) {
      g.direct_costs[rider] = source.direct_cost(rider);
      direct_sum += g.direct_costs[rider];
    }
    g.operator_cost = g.total_cost - direct_sum - g.societal_cost;
    if (!source.route.empty()) {
      g.route.length_km = source.route.length_km;
      g.route.duration_hours = source.route.duration_hours;
      for (const auto& stop : source.route.stops) {
        if (std::binary_search(members.begin(), members.end(), stop.rider)) {
          g.route.stops.push_back(stop);
        }
      }
      for (int rider : members) {
        g.route.wait_hours[rider] = source.route.wait_hours.at(rider);
        g.route.ride_hours[rider] = source.route.ride_hours.at(rider);
      }
    }
    return g;
  };

  GroupCatalog closed(catalog.n_riders());
  std::vector<Group> all = catalog.groups();
  for (const auto& [members, source_idx] : insert_from) {
    all.push_back(derive_from(members, catalog[source_idx]));
  }
  std::sort(all.begin(), all.end(), [](const Group& a, const Group& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.members < b.members;
  });
  for (auto& g : all) closed.add(std::move(g));

  // Downward min-pass: one sweep from large to small sizes is enough because
  // a lowered (s-1)-group is seen before its own subsets.
  std::vector<int> order(closed.size());
  for (int i = 0; i < closed.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return closed[a].size() > closed[b].size();
  });
  GroupCatalog result(closed.n_riders());
  std::vector<Group> final_groups = closed.groups();
  for (int idx : order) {
    const Group& g = final_groups[idx];
    if (g.size() < 2) continue;
    for (size_t drop = 0; drop < g.members.size(); ++drop) {
      Members sub = g.members;
      sub.erase(sub.begin() + drop);
      const int sub_idx = closed.require(sub);
      if (final_groups[sub_idx].total_cost > g.total_cost + 1e-15) {
        Group lowered = derive_from(sub, g);
        lowered.closure_inserted = final_groups[sub_idx].closure_inserted;
        final_groups[sub_idx] = std::move(lowered);
      }
    }
  }
  for (auto& g : final_groups) result.add(std::move(g));
  return result;
}

}  // namespace ctg
