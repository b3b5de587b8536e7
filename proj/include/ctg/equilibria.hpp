#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ctg/core.hpp"

namespace ctg {

enum class ExclusionKind { mergeable, individually_unstable };

// Unordered pairs of catalog groups that may not be selected together.
struct ExclusionPairs {
  ExclusionKind kind = ExclusionKind::mergeable;
  std::vector<std::pair<int, int>> pairs;  // (lo, hi) group indices
};

// Groups where every member weakly prefers the group to travelling alone.
// Singletons always qualify.
std::vector<int> tne_groups(const CostShareTable& table);

// True iff no proper subset strictly prefers to split off.
bool is_hermetic(const Members& members, const CostShareTable& table);

// Everyone in the union weakly improves over her current group, somebody
// strictly; union must be feasible.
bool are_mergeable(const Members& a, const Members& b, const CostShareTable& table);

// Some rider of `from` strictly improves by joining `to`, and everyone in
// `to` weakly accepts her.
bool is_individually_unstable(const Members& from, const Members& to,
                              const CostShareTable& table);

// All mergeable pairs among restrict_to (normally the TNE groups).
ExclusionPairs mergeable_pairs(const CostShareTable& table, const std::vector<int>& restrict_to);

// All individually unstable pairs over the whole catalog. The empty-receiver
// case is not enumerated here; it is equivalent to the TNE group filter.
ExclusionPairs individually_unstable_pairs(const CostShareTable& table);

bool verify(const Matching& matching, EquilibriumNotion notion, const CostShareTable& table);

// Merges mergeable pairs starting from everybody alone until none remains.
// The result verifies as RUE.
Matching greedy_rue(const CostShareTable& table);

// Exhaustive search over all matchings for one satisfying every listed
// notion; lexicographically first witness. Guarded by max_riders.
std::optional<Matching> exists_equilibrium(std::span<const EquilibriumNotion> notions,
                                           const CostShareTable& table, int max_riders = 12);
std::optional<Matching> exists_equilibrium(EquilibriumNotion notion,
                                           const CostShareTable& table, int max_riders = 12);

// Invokes f on every matching (exact cover by catalog groups), in
// lexicographic order of the selected index set; f returns false to stop.
void for_each_matching(const GroupCatalog& catalog,
                       const std::function<bool(const Matching&)>& f);

// --------------------------------------------------------------------------
// Ordinal instances

// Preference-list instance: pref[i] is rider i's strict ranking (best first)
// of indices into `feasible`; it must contain her singleton, and groups
// ranked after it count as worse than travelling alone.
struct OrdinalInstance {
  int riders = 0;
  std::vector<Members> feasible;
  std::vector<std::vector<int>> pref;
};

void validate_ordinal(const OrdinalInstance& instance);

// Cardinal embedding: c_i(G) = rank_i(G) + D with D > n * max rank, so each
// rider's order is preserved while group totals become monotone on the
// subset lattice. Missing subsets are inserted ranked below travelling
// alone. Fills catalog_out (whose address the returned table is bound to;
// keep it alive and in place while the table is used).
CostShareTable ordinal_to_cardinal(const OrdinalInstance& instance, double d,
                                   GroupCatalog& catalog_out);

double ordinal_min_d(const OrdinalInstance& instance);

// Three riders whose pairwise preferences cycle; admits no TSE and no RSIE.
OrdinalInstance no_tse_cycle_instance();

// Five riders around a circle; no matching is hermetic and unmergeable at
// the same time.
OrdinalInstance rhe_rue_conflict_instance();

}  // namespace ctg
