#pragma once

#include <vector>

#include "ctg/core.hpp"

namespace ctg {

struct FeasibilityParams {
  int capacity = 4;             // max group size
  double detour_factor = 1.5;   // pooled direct cost vs solo direct cost, per rider
  Metric metric = Metric::euclidean;
  double speed_kmh = 30.0;
};

// Cheapest stop sequence for the group under the cost model: every origin
// precedes its destination, the vehicle starts at the first pickup at that
// rider's departure time, and holds at an origin if it arrives before the
// rider's departure (holding counts as ride time for everyone on board).
// Ties between sequences are broken lexicographically.
Route optimal_route(const Members& members, const std::vector<TripRequest>& requests,
                    const CostParams& cost, const FeasibilityParams& params);

// beta_t * t(G,i) + beta_w * w(G,i).
double direct_user_cost(const Route& route, int rider, const CostParams& cost);

// beta_l * l(G) + beta_v.
double operator_cost(const Route& route, const CostParams& cost);

Group make_group(Members members, const std::vector<TripRequest>& requests,
                 const CostParams& cost, const FeasibilityParams& params);

// Hierarchical generation: all singletons, then each size level keeps a group
// iff all its (size-1)-subsets survived and no member exceeds the detour factor.
// The result is closed and monotone via close_under_subsets.
GroupCatalog enumerate_feasible_groups(const std::vector<TripRequest>& requests,
                                       const CostParams& cost,
                                       const FeasibilityParams& params);

// Inserts every missing subset of a catalog group, priced at the cheapest
// original group strictly containing it, then enforces cost monotonicity on
// the subset lattice with a downward min-pass.
GroupCatalog close_under_subsets(const GroupCatalog& catalog);

}  // namespace ctg
