#include "ctg/protocols.hpp"

#include <algorithm>
#include <cmath>

#include "ctg/money.hpp"

namespace ctg {

CostShareTable externality_shares(const GroupCatalog& catalog) {
  CostShareTable table(catalog, "externality", BudgetMode::unconstrained);
  for (int g = 0; g < catalog.size(); ++g) {
    const auto& members = catalog[g].members;
    const double c = catalog[g].total_cost;
    std::vector<double> shares;
    shares.reserve(members.size());
    for (int rider : members) {
      const Members rest = set_difference(members, Members{rider});
      if (!rest.empty() && !catalog.contains(rest)) {
        throw missing_subset_error("externality shares need subset " +
                                   members_to_string(rest) + "; close the catalog first");
      }
      shares.push_back(c - catalog.total_cost(rest));
    }
    table.set_group_shares(g, std::move(shares));
  }
  return table;
}

CostShareTable overcharged_externality_shares(const GroupCatalog& catalog,
                                              std::optional<double> d) {
  double max_cost = 0.0;
  for (const auto& g : catalog.groups()) max_cost = std::max(max_cost, g.total_cost);
  const double shift = d.value_or(max_cost);
  if (shift < max_cost - money::kEpsIdentity) {
    throw d_too_small_error("overcharge constant " + std::to_string(shift) +
                            " is below the maximal group cost " + std::to_string(max_cost));
  }
  CostShareTable base = externality_shares(catalog);
  CostShareTable table(catalog, "externality-over", BudgetMode::overcharging);
  for (int g = 0; g < catalog.size(); ++g) {
    std::vector<double> shares = base.group_shares(g);
    for (double& s : shares) s += shift;
    table.set_group_shares(g, std::move(shares));
  }
  return table;
}

CostShareTable residual_shares(const GroupCatalog& catalog, ResidualWeighting weighting) {
  const std::string tag =
      weighting == ResidualWeighting::proportional ? "residual-proportional" : "residual-uniform";
  CostShareTable table(catalog, tag, BudgetMode::balanced);
  std::vector<double> solo(catalog.n_riders());
  for (int rider = 0; rider < catalog.n_riders(); ++rider) {
    solo[rider] = catalog.total_cost(Members{rider});
    if (weighting == ResidualWeighting::proportional && solo[rider] <= 0.0) {
      throw zero_singleton_cost_error("proportional residual prices need c({" +
                                      std::to_string(rider) + "}) > 0");
    }
  }
  for (int g = 0; g < catalog.size(); ++g) {
    const auto& members = catalog[g].members;
    double solo_sum = 0.0;
    for (int rider : members) solo_sum += solo[rider];
    const double residual = catalog[g].total_cost - solo_sum;
    std::vector<double> shares;
    shares.reserve(members.size());
    for (int rider : members) {
      const double weight = weighting == ResidualWeighting::proportional
                                ? solo[rider] / solo_sum
                                : 1.0 / static_cast<double>(members.size());
      shares.push_back(solo[rider] + residual * weight);
    }
    table.set_group_shares(g, std::move(shares));
  }
  return table;
}

namespace {

// Sort key shared by the greedy block selection: cheaper average first, then
// larger blocks, then lexicographic members.
struct BlockKey {
  double average;
  int size;
  const Members* members;
  bool operator<(const BlockKey& o) const {
    if (average != o.average) return average < o.average;
    if (size != o.size) return size > o.size;
    return *members < *o.members;
  }
};

}  // namespace

SubgroupDecomposition subgroup_decompose(const Members& members, const GroupCatalog& catalog) {
  // All catalog subsets of the group, pre-sorted by average cost. This is the
  // greedy-scan formulation; a subset-closed catalog makes it equivalent to
  // the iterated argmin over remaining riders.
  struct Candidate {
    Members members;
    double average;
  };
  std::vector<Candidate> candidates;
  for_each_subset(members, true, [&](const Members& h) {
    auto idx = catalog.find(h);
    if (!idx) return;
    candidates.push_back(Candidate{h, catalog[*idx].total_cost / h.size()});
  });
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return BlockKey{a.average, static_cast<int>(a.members.size()), &a.members} <
           BlockKey{b.average, static_cast<int>(b.members.size()), &b.members};
  });

  SubgroupDecomposition out;
  Members remaining = members;
  for (const auto& cand : candidates) {
    if (remaining.empty()) break;
    if (!is_subset(cand.members, remaining)) continue;
    for (int rider : cand.members) {
      out.z[rider] = cand.average;
      out.phi[rider] = cand.members;
    }
    out.ordered_parts.emplace_back(cand.members, cand.average);
    remaining = set_difference(remaining, cand.members);
  }
  if (!remaining.empty()) {
    throw missing_subset_error("subgroup decomposition of " + members_to_string(members) +
                               " ran out of catalog subsets; close the catalog first");
  }
  double z_sum = 0.0;
  for (int rider : members) z_sum += out.z.at(rider);
  out.excess = catalog.total_cost(members) - z_sum;
  return out;
}

namespace {

std::vector<double> balance_negative_excess(const Members& members, double total,
                                            const SubgroupDecomposition& deco) {
  const double average = total / static_cast<double>(members.size());
  const auto& parts = deco.ordered_parts;
  const int q = static_cast<int>(parts.size());

  // First block at or above the group average; exists when the excess is
  // negative.
  int first = q;
  for (int i = 0; i < q; ++i) {
    if (parts[i].second >= average - money::kEpsIdentity) {
      first = i;
      break;
    }
  }
  if (first == q) {
    throw error("negative excess without a block at the group average in " +
                members_to_string(members));
  }

  // Largest prefix of blocks [first..last] that can be flattened to the group
  // average while the assigned costs still cover the group.
  auto assigned_sum = [&](int last) {
    double sum = 0.0;
    for (int i = 0; i < q; ++i) {
      const double block_value = (i >= first && i <= last) ? average : parts[i].second;
      sum += block_value * static_cast<double>(parts[i].first.size());
    }
    return sum;
  };
  int last = first - 1;
  while (last + 1 < q && assigned_sum(last + 1) >= total - money::kEpsIdentity) ++last;

  std::map<int, double> cost;
  double fixed_sum = 0.0;
  for (int i = 0; i < q; ++i) {
    if (i == last + 1) continue;  // absorber block set below
    const double block_value = (i >= first && i <= last) ? average : parts[i].second;
    for (int rider : parts[i].first) cost[rider] = block_value;
    fixed_sum += block_value * static_cast<double>(parts[i].first.size());
  }
  if (last + 1 < q) {
    const auto& absorber = parts[last + 1].first;
    const double value = (total - fixed_sum) / static_cast<double>(absorber.size());
    for (int rider : absorber) cost[rider] = value;
  }

  std::vector<double> shares;
  shares.reserve(members.size());
  for (int rider : members) shares.push_back(cost.at(rider));
  return shares;
}

}  // namespace

CostShareTable subgroup_shares(const GroupCatalog& catalog) {
  CostShareTable table(catalog, "subgroup", BudgetMode::balanced);
  for (int g = 0; g < catalog.size(); ++g) {
    const auto& members = catalog[g].members;
    const double total = catalog[g].total_cost;
    const SubgroupDecomposition deco = subgroup_decompose(members, catalog);
    std::vector<double> shares;
    if (deco.excess >= 0.0) {
      shares.reserve(members.size());
      for (int rider : members) {
        shares.push_back(deco.z.at(rider) + deco.excess / static_cast<double>(members.size()));
      }
    } else {
      shares = balance_negative_excess(members, total, deco);
    }
    table.set_group_shares(g, std::move(shares));
  }
  return table;
}

std::string to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::externality: return "externality";
    case Protocol::externality_overcharged: return "externality-over";
    case Protocol::residual: return "residual";
    case Protocol::subgroup: return "subgroup";
  }
  return "externality";
}

Protocol protocol_from_string(const std::string& s) {
  if (s == "externality") return Protocol::externality;
  if (s == "externality-over") return Protocol::externality_overcharged;
  if (s == "residual") return Protocol::residual;
  if (s == "subgroup") return Protocol::subgroup;
  throw parse_error("unknown protocol: " + s);
}

CostShareTable build_share_table(const GroupCatalog& catalog, Protocol protocol,
                                 const ProtocolOptions& options) {
  switch (protocol) {
    case Protocol::externality:
      return externality_shares(catalog);
    case Protocol::externality_overcharged:
      return overcharged_externality_shares(catalog, options.overcharge_d);
    case Protocol::residual:
      return residual_shares(catalog, options.weighting);
    case Protocol::subgroup:
      return subgroup_shares(catalog);
  }
  throw error("unreachable protocol dispatch");
}

}  // namespace ctg
