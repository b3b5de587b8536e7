#include "ctg/equilibria.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "ctg/money.hpp"

namespace ctg {

std::vector<int> tne_groups(const CostShareTable& table) {
  const auto& catalog = table.catalog();
  std::vector<int> out;
  for (int g = 0; g < catalog.size(); ++g) {
    bool ok = true;
    for (int rider : catalog[g].members) {
      if (!money::leq(table.share(g, rider), table.solo_share(rider))) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(g);
  }
  return out;
}

bool is_hermetic(const Members& members, const CostShareTable& table) {
  const auto& catalog = table.catalog();
  const int g = catalog.require(members);
  bool hermetic = true;
  for_each_subset(members, false, [&](const Members& h) {
    if (!hermetic) return;
    const int h_idx = catalog.require(h);
    // H leaves iff every member of H is strictly better off in H.
    bool wants_to_leave = true;
    for (int rider : h) {
      if (money::leq(table.share(g, rider), table.share(h_idx, rider))) {
        wants_to_leave = false;
        break;
      }
    }
    if (wants_to_leave) hermetic = false;
  });
  return hermetic;
}

bool are_mergeable(const Members& a, const Members& b, const CostShareTable& table) {
  if (!are_disjoint(a, b)) return false;
  const auto& catalog = table.catalog();
  const Members merged = set_union(a, b);
  auto merged_idx = catalog.find(merged);
  if (!merged_idx) return false;
  const int a_idx = catalog.require(a);
  const int b_idx = catalog.require(b);
  bool some_strict = false;
  for (int rider : merged) {
    const int own = std::binary_search(a.begin(), a.end(), rider) ? a_idx : b_idx;
    const double before = table.share(own, rider);
    const double after = table.share(*merged_idx, rider);
    if (!money::leq(after, before)) return false;
    if (money::lt(after, before)) some_strict = true;
  }
  return some_strict;
}

bool is_individually_unstable(const Members& from, const Members& to,
                              const CostShareTable& table) {
  if (!are_disjoint(from, to)) return false;
  const auto& catalog = table.catalog();
  const int from_idx = catalog.require(from);
  const int to_idx = to.empty() ? -1 : catalog.require(to);
  for (int rider : from) {
    const Members target = set_union(to, Members{rider});
    auto target_idx = catalog.find(target);
    if (!target_idx) continue;
    if (!money::lt(table.share(*target_idx, rider), table.share(from_idx, rider))) continue;
    bool accepted = true;
    for (int receiver : to) {
      if (!money::leq(table.share(*target_idx, receiver), table.share(to_idx, receiver))) {
        accepted = false;
        break;
      }
    }
    if (accepted) return true;
  }
  return false;
}

ExclusionPairs mergeable_pairs(const CostShareTable& table, const std::vector<int>& restrict_to) {
  const auto& catalog = table.catalog();
  ExclusionPairs out{ExclusionKind::mergeable, {}};
  for (size_t i = 0; i < restrict_to.size(); ++i) {
    for (size_t j = i + 1; j < restrict_to.size(); ++j) {
      const int a = restrict_to[i];
      const int b = restrict_to[j];
      if (are_mergeable(catalog[a].members, catalog[b].members, table)) {
        out.pairs.emplace_back(std::min(a, b), std::max(a, b));
      }
    }
  }
  return out;
}

ExclusionPairs individually_unstable_pairs(const CostShareTable& table) {
  const auto& catalog = table.catalog();
  ExclusionPairs out{ExclusionKind::individually_unstable, {}};
  for (int a = 0; a < catalog.size(); ++a) {
    for (int b = a + 1; b < catalog.size(); ++b) {
      if (!are_disjoint(catalog[a].members, catalog[b].members)) continue;
      if (is_individually_unstable(catalog[a].members, catalog[b].members, table) ||
          is_individually_unstable(catalog[b].members, catalog[a].members, table)) {
        out.pairs.emplace_back(a, b);
      }
    }
  }
  return out;
}

namespace {

bool verify_tne(const Matching& m, const CostShareTable& table) {
  const auto& catalog = table.catalog();
  for (int g : m.selected) {
    for (int rider : catalog[g].members) {
      if (!money::leq(table.share(g, rider), table.solo_share(rider))) return false;
    }
  }
  return true;
}

bool verify_tse(const Matching& m, const CostShareTable& table) {
  const auto& catalog = table.catalog();
  std::vector<int> assigned(catalog.n_riders(), -1);
  for (int g : m.selected) {
    for (int rider : catalog[g].members) assigned[rider] = g;
  }
  for (int g = 0; g < catalog.size(); ++g) {
    const auto& members = catalog[g].members;
    bool selected_as_is = true;
    for (int rider : members) {
      if (assigned[rider] != g) {
        selected_as_is = false;
        break;
      }
    }
    if (selected_as_is) continue;
    bool someone_content = false;
    for (int rider : members) {
      if (money::leq(table.share(assigned[rider], rider), table.share(g, rider))) {
        someone_content = true;
        break;
      }
    }
    if (!someone_content) return false;
  }
  return true;
}

}  // namespace

bool verify(const Matching& matching, EquilibriumNotion notion, const CostShareTable& table) {
  const auto& catalog = table.catalog();
  if (!validate_matching(matching, catalog).valid) return false;
  switch (notion) {
    case EquilibriumNotion::TNE:
      return verify_tne(matching, table);
    case EquilibriumNotion::RHE: {
      for (int g : matching.selected) {
        if (!is_hermetic(catalog[g].members, table)) return false;
      }
      return true;
    }
    case EquilibriumNotion::RUE: {
      if (!verify_tne(matching, table)) return false;
      for (size_t i = 0; i < matching.selected.size(); ++i) {
        for (size_t j = i + 1; j < matching.selected.size(); ++j) {
          if (are_mergeable(catalog[matching.selected[i]].members,
                            catalog[matching.selected[j]].members, table)) {
            return false;
          }
        }
      }
      return true;
    }
    case EquilibriumNotion::RSIE: {
      // The empty receiver reduces to the TNE condition.
      if (!verify_tne(matching, table)) return false;
      for (int a : matching.selected) {
        for (int b : matching.selected) {
          if (a == b) continue;
          if (is_individually_unstable(catalog[a].members, catalog[b].members, table)) {
            return false;
          }
        }
      }
      return true;
    }
    case EquilibriumNotion::TSE:
      return verify_tse(matching, table);
  }
  return false;
}

Matching greedy_rue(const CostShareTable& table) {
  const auto& catalog = table.catalog();
  std::vector<Members> current;
  for (int rider = 0; rider < catalog.n_riders(); ++rider) current.push_back(Members{rider});

  bool merged = true;
  while (merged) {
    merged = false;
    for (size_t i = 0; i < current.size() && !merged; ++i) {
      for (size_t j = i + 1; j < current.size() && !merged; ++j) {
        if (!are_mergeable(current[i], current[j], table)) continue;
        Members unioned = set_union(current[i], current[j]);
        current.erase(current.begin() + j);
        current.erase(current.begin() + i);
        current.push_back(std::move(unioned));
        std::sort(current.begin(), current.end());
        merged = true;
      }
    }
  }

  Matching out;
  for (const auto& members : current) out.selected.push_back(catalog.require(members));
  std::sort(out.selected.begin(), out.selected.end());
  return out;
}

void for_each_matching(const GroupCatalog& catalog,
                       const std::function<bool(const Matching&)>& f) {
  const int n = catalog.n_riders();
  const auto by_rider = catalog.groups_by_rider();
  std::vector<bool> covered(n, false);
  std::vector<int> chosen;
  bool stop = false;

  std::function<void()> descend = [&]() {
    if (stop) return;
    int rider = 0;
    while (rider < n && covered[rider]) ++rider;
    if (rider == n) {
      Matching m;
      m.selected = chosen;
      std::sort(m.selected.begin(), m.selected.end());
      if (!f(m)) stop = true;
      return;
    }
    for (int g : by_rider[rider]) {
      const auto& members = catalog[g].members;
      bool free = true;
      for (int r : members) {
        if (covered[r]) {
          free = false;
          break;
        }
      }
      if (!free) continue;
      for (int r : members) covered[r] = true;
      chosen.push_back(g);
      descend();
      chosen.pop_back();
      for (int r : members) covered[r] = false;
      if (stop) return;
    }
  };
  descend();
}

std::optional<Matching> exists_equilibrium(std::span<const EquilibriumNotion> notions,
                                           const CostShareTable& table, int max_riders) {
  const auto& catalog = table.catalog();
  if (catalog.n_riders() > max_riders) {
    throw instance_too_large_error("exhaustive matching search is guarded at " +
                                   std::to_string(max_riders) + " riders");
  }
  std::optional<Matching> witness;
  for_each_matching(catalog, [&](const Matching& m) {
    for (EquilibriumNotion notion : notions) {
      if (!verify(m, notion, table)) return true;  // keep searching
    }
    witness = m;
    return false;
  });
  return witness;
}

std::optional<Matching> exists_equilibrium(EquilibriumNotion notion,
                                           const CostShareTable& table, int max_riders) {
  const EquilibriumNotion one[] = {notion};
  return exists_equilibrium(std::span<const EquilibriumNotion>(one), table, max_riders);
}

// --------------------------------------------------------------------------
// Ordinal instances

void validate_ordinal(const OrdinalInstance& instance) {
  if (instance.riders < 1) throw error("ordinal instance needs at least one rider");
  if (static_cast<int>(instance.pref.size()) != instance.riders) {
    throw error("ordinal instance needs one preference list per rider");
  }
  for (const auto& g : instance.feasible) {
    if (g.empty()) throw error("ordinal feasible groups must be non-empty");
    if (!std::is_sorted(g.begin(), g.end()) || g.back() >= instance.riders || g.front() < 0) {
      throw error("ordinal feasible group out of range: " + members_to_string(g));
    }
  }
  for (int rider = 0; rider < instance.riders; ++rider) {
    std::set<int> seen;
    bool has_singleton = false;
    for (int gi : instance.pref[rider]) {
      if (gi < 0 || gi >= static_cast<int>(instance.feasible.size())) {
        throw error("preference index out of range for rider " + std::to_string(rider));
      }
      if (!seen.insert(gi).second) {
        throw error("duplicate group in preferences of rider " + std::to_string(rider));
      }
      const auto& members = instance.feasible[gi];
      if (!std::binary_search(members.begin(), members.end(), rider)) {
        throw error("rider " + std::to_string(rider) + " ranks group " +
                    members_to_string(members) + " she does not belong to");
      }
      if (members == Members{rider}) has_singleton = true;
    }
    if (!has_singleton) {
      throw error("rider " + std::to_string(rider) + " must rank her singleton");
    }
    // The ranking must be complete over her feasible groups.
    for (size_t gi = 0; gi < instance.feasible.size(); ++gi) {
      const auto& members = instance.feasible[gi];
      if (std::binary_search(members.begin(), members.end(), rider) &&
          !seen.count(static_cast<int>(gi))) {
        throw error("rider " + std::to_string(rider) + " does not rank group " +
                    members_to_string(members));
      }
    }
  }
}

double ordinal_min_d(const OrdinalInstance& instance) {
  // Subset closure can push ranks past the explicit lists; bound by the
  // total number of groups a rider could end up ranking.
  size_t max_groups = instance.feasible.size();
  for (const auto& g : instance.feasible) {
    max_groups += (1u << g.size());
  }
  return static_cast<double>(instance.riders) * static_cast<double>(max_groups);
}

CostShareTable ordinal_to_cardinal(const OrdinalInstance& instance, double d,
                                   GroupCatalog& catalog_out) {
  validate_ordinal(instance);

  // Close the family: missing subsets are ranked below everything explicit,
  // in lexicographic order, which puts them after travelling alone.
  std::vector<Members> all_groups = instance.feasible;
  std::set<Members> present(all_groups.begin(), all_groups.end());
  std::set<Members> extras;
  for (const auto& g : instance.feasible) {
    for_each_subset(g, false, [&](const Members& h) {
      if (!present.count(h)) extras.insert(h);
    });
  }
  for (int rider = 0; rider < instance.riders; ++rider) {
    Members solo{rider};
    if (!present.count(solo)) extras.insert(solo);
  }
  all_groups.insert(all_groups.end(), extras.begin(), extras.end());

  // rank[rider][group position in all_groups]
  std::vector<std::map<int, int>> rank(instance.riders);
  int max_rank = 0;
  std::map<Members, int> position;
  for (size_t i = 0; i < all_groups.size(); ++i) position[all_groups[i]] = static_cast<int>(i);
  for (int rider = 0; rider < instance.riders; ++rider) {
    int next = 1;
    for (int gi : instance.pref[rider]) {
      rank[rider][position.at(instance.feasible[gi])] = next++;
    }
    for (const auto& extra : extras) {
      if (std::binary_search(extra.begin(), extra.end(), rider)) {
        rank[rider][position.at(extra)] = next++;
      }
    }
    max_rank = std::max(max_rank, next - 1);
  }

  if (d <= static_cast<double>(instance.riders) * max_rank) {
    throw d_too_small_error("need D > n * max rank = " +
                            std::to_string(instance.riders * max_rank));
  }

  std::vector<Group> groups;
  for (size_t i = 0; i < all_groups.size(); ++i) {
    Group g;
    g.members = all_groups[i];
    double total = 0.0;
    for (int rider : g.members) {
      const double c_i = rank[rider].at(static_cast<int>(i)) + d;
      g.direct_costs[rider] = c_i;
      total += c_i;
    }
    g.total_cost = total;
    g.operator_cost = 0.0;
    g.closure_inserted = extras.count(g.members) > 0;
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.members < b.members;
  });

  catalog_out = GroupCatalog(instance.riders);
  for (auto& g : groups) catalog_out.add(std::move(g));

  CostShareTable table(catalog_out, "ordinal", BudgetMode::balanced);
  for (int g = 0; g < catalog_out.size(); ++g) {
    std::vector<double> shares;
    for (int rider : catalog_out[g].members) {
      shares.push_back(catalog_out[g].direct_cost(rider));
    }
    table.set_group_shares(g, std::move(shares));
  }
  return table;
}

OrdinalInstance no_tse_cycle_instance() {
  OrdinalInstance instance;
  instance.riders = 3;
  instance.feasible = {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}};
  // Pairwise preferences cycle: 0 wants 1, 1 wants 2, 2 wants 0; alone is
  // worst and the full triple is infeasible.
  instance.pref = {
      {3, 4, 0},  // rider 0: {0,1}, {0,2}, alone
      {5, 3, 1},  // rider 1: {1,2}, {0,1}, alone
      {4, 5, 2},  // rider 2: {0,2}, {1,2}, alone
  };
  return instance;
}

OrdinalInstance rhe_rue_conflict_instance() {
  OrdinalInstance instance;
  instance.riders = 5;
  instance.feasible = {
      {0}, {1}, {2}, {3}, {4},                       // 0..4
      {0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4},        // 5..9
      {0, 1, 2}, {0, 1, 4}, {0, 3, 4}, {1, 2, 3}, {2, 3, 4},  // 10..14
  };
  // Rider i ranks: {i,i+1,i+2}, {i,i+1}, {i-1,i,i+1}, {i-1,i}, {i-2,i-1,i},
  // then alone (indices mod 5).
  instance.pref = {
      {10, 5, 11, 6, 12, 0},
      {13, 7, 10, 5, 11, 1},
      {14, 8, 13, 7, 10, 2},
      {12, 9, 14, 8, 13, 3},
      {11, 6, 12, 9, 14, 4},
  };
  return instance;
}

}  // namespace ctg
