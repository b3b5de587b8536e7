#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctg/core.hpp"
#include "ctg/feasibility.hpp"
#include "ctg/protocols.hpp"
#include "ctg/scenario.hpp"
#include "ctg/solver.hpp"

namespace ctg {

struct KpiRow {
  Protocol protocol;
  EquilibriumNotion notion;
  std::string scenario_case;  // "best" | "worst"
  bool feasible = false;
  double pax_hours = 0.0;
  double veh_hours = 0.0;
  int n_groups = 0;
  double objective = 0.0;
  std::optional<double> ratio;  // PoS for best rows, PoA for worst rows
};

struct ExperimentResult {
  double optimum = 0.0;
  std::vector<KpiRow> rows;  // fixed (protocol, notion, case) order
  bool any_infeasible = false;
};

// The full sweep: shares per protocol, pruning/exclusions per notion, then a
// min and a max solve per cell, each verified against its own notion.
ExperimentResult run_experiment(const Instance& instance, const FeasibilityParams& feas,
                                const std::vector<Protocol>& protocols,
                                const std::vector<EquilibriumNotion>& notions);

// Sum of collected shares over selected groups divided by their total cost.
double coverage_ratio(const Matching& matching, const CostShareTable& table);

// Per rider: (assigned share - her cheapest share) / cheapest share, sorted
// ascending and paired with CDF coordinates.
std::vector<std::pair<double, double>> regret_cdf(const Matching& matching,
                                                  const CostShareTable& table);

struct ShareabilityGraph {
  int n_riders = 0;
  std::vector<std::pair<int, int>> edges;  // directly feasible pairs
  std::map<int, int> group_size_histogram;
  double mean_degree = 0.0;
};

ShareabilityGraph shareability_graph(const GroupCatalog& catalog);
std::string shareability_to_dot(const ShareabilityGraph& graph);
std::string shareability_to_json_text(const ShareabilityGraph& graph);

std::string kpi_csv(const ExperimentResult& result);

}  // namespace ctg
