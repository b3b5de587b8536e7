#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ctg/core.hpp"

namespace ctg {

enum class ResidualWeighting { proportional, uniform };

// Per-group output of the subgroup pricing pass: each rider's raw cost is the
// average cost of the cheapest covering block, blocks partition the group.
struct SubgroupDecomposition {
  std::map<int, double> z;        // z_i(G)
  std::map<int, Members> phi;     // phi_i(G)
  std::vector<std::pair<Members, double>> ordered_parts;  // ascending average cost
  double excess = 0.0;            // e(G) = c(G) - sum z_i
};

// c_i(G) = c(G) - c(G \ {i}). Needs a subset-closed catalog. Neither budget
// balanced nor overcharging in general.
CostShareTable externality_shares(const GroupCatalog& catalog);

// Externality shares shifted by a constant D >= max_G c(G); overcharging.
// D defaults to max_G c(G).
CostShareTable overcharged_externality_shares(const GroupCatalog& catalog,
                                              std::optional<double> d = std::nullopt);

// c_i(G) = c({i}) + p(i,G), residual prices sharing Delta c(G) with a common
// sign. Budget balanced.
CostShareTable residual_shares(const GroupCatalog& catalog, ResidualWeighting weighting);

SubgroupDecomposition subgroup_decompose(const Members& members, const GroupCatalog& catalog);

// Subgroup-based protocol: raw z costs rebalanced to the group budget.
// Positive excess is split uniformly; negative excess flattens the most
// expensive blocks down to the group average. Budget balanced.
CostShareTable subgroup_shares(const GroupCatalog& catalog);

enum class Protocol { externality, externality_overcharged, residual, subgroup };

std::string to_string(Protocol protocol);
Protocol protocol_from_string(const std::string& s);

struct ProtocolOptions {
  ResidualWeighting weighting = ResidualWeighting::proportional;
  std::optional<double> overcharge_d;
};

CostShareTable build_share_table(const GroupCatalog& catalog, Protocol protocol,
                                 const ProtocolOptions& options = {});

}  // namespace ctg
