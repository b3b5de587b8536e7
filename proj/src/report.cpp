#include "ctg/report.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ctg/money.hpp"

namespace ctg {

namespace {

std::pair<double, double> hours_of(const Matching& matching, const GroupCatalog& catalog) {
  double pax = 0.0;
  double veh = 0.0;
  for (int g : matching.selected) {
    const auto& route = catalog[g].route;
    for (const auto& [rider, w] : route.wait_hours) pax += w + route.ride_hours.at(rider);
    veh += route.duration_hours;
  }
  return {pax, veh};
}

}  // namespace

ExperimentResult run_experiment(const Instance& instance, const FeasibilityParams& feas,
                                const std::vector<Protocol>& protocols,
                                const std::vector<EquilibriumNotion>& notions) {
  const GroupCatalog catalog =
      enumerate_feasible_groups(instance.requests, instance.params, feas);

  SolveSpec unconstrained;
  unconstrained.catalog = &catalog;
  const SolveResult optimum = solve(unconstrained);

  ExperimentResult result;
  result.optimum = optimum.objective_value;

  for (Protocol protocol : protocols) {
    const CostShareTable table = build_share_table(catalog, protocol);
    for (EquilibriumNotion notion : notions) {
      const SolveSpec base = constrained_spec(table, notion, Objective::minimize);
      for (const char* which : {"best", "worst"}) {
        SolveSpec spec = base;
        spec.objective =
            std::string(which) == "best" ? Objective::minimize : Objective::maximize;
        const SolveResult solved = solve(spec);

        KpiRow row;
        row.protocol = protocol;
        row.notion = notion;
        row.scenario_case = which;
        row.feasible = solved.status == SolveStatus::optimal;
        if (row.feasible) {
          if (!verify(solved.matching, notion, table)) {
            throw error("solver returned a matching that fails its own notion (" +
                        to_string(notion) + ")");
          }
          const auto [pax, veh] = hours_of(solved.matching, catalog);
          row.pax_hours = pax;
          row.veh_hours = veh;
          row.n_groups = static_cast<int>(solved.matching.selected.size());
          row.objective = solved.objective_value;
          if (optimum.objective_value > 0.0) {
            row.ratio = solved.objective_value / optimum.objective_value;
          }
        } else {
          result.any_infeasible = true;
        }
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

double coverage_ratio(const Matching& matching, const CostShareTable& table) {
  const auto& catalog = table.catalog();
  double collected = 0.0;
  double cost = 0.0;
  for (int g : matching.selected) {
    for (double s : table.group_shares(g)) collected += s;
    cost += catalog[g].total_cost;
  }
  if (cost <= 0.0) throw error("coverage ratio needs a positive matching cost");
  return collected / cost;
}

std::vector<std::pair<double, double>> regret_cdf(const Matching& matching,
                                                  const CostShareTable& table) {
  const auto& catalog = table.catalog();
  std::vector<int> assigned(catalog.n_riders(), -1);
  for (int g : matching.selected) {
    for (int rider : catalog[g].members) assigned[rider] = g;
  }
  std::vector<double> regrets;
  for (int rider = 0; rider < catalog.n_riders(); ++rider) {
    double cheapest = std::numeric_limits<double>::infinity();
    for (int g = 0; g < catalog.size(); ++g) {
      if (!catalog[g].contains(rider)) continue;
      cheapest = std::min(cheapest, table.share(g, rider));
    }
    if (cheapest <= 0.0) throw error("regret needs positive shares");
    regrets.push_back((table.share(assigned[rider], rider) - cheapest) / cheapest);
  }
  std::sort(regrets.begin(), regrets.end());
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(regrets.size());
  for (size_t i = 0; i < regrets.size(); ++i) {
    out.emplace_back(regrets[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

ShareabilityGraph shareability_graph(const GroupCatalog& catalog) {
  ShareabilityGraph graph;
  graph.n_riders = catalog.n_riders();
  for (const auto& g : catalog.groups()) {
    ++graph.group_size_histogram[g.size()];
    if (g.size() == 2 && !g.closure_inserted) {
      graph.edges.emplace_back(g.members[0], g.members[1]);
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  graph.mean_degree = graph.n_riders > 0
                          ? 2.0 * static_cast<double>(graph.edges.size()) / graph.n_riders
                          : 0.0;
  return graph;
}

std::string shareability_to_dot(const ShareabilityGraph& graph) {
  std::ostringstream out;
  out << "graph shareability {\n";
  for (int i = 0; i < graph.n_riders; ++i) out << "  " << i << ";\n";
  for (const auto& [a, b] : graph.edges) out << "  " << a << " -- " << b << ";\n";
  out << "}\n";
  return out.str();
}

std::string shareability_to_json_text(const ShareabilityGraph& graph) {
  nlohmann::json j;
  j["n_riders"] = graph.n_riders;
  j["edges"] = graph.edges;
  j["mean_degree"] = graph.mean_degree;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [size, count] : graph.group_size_histogram) {
    hist[std::to_string(size)] = count;
  }
  j["group_size_histogram"] = hist;
  return j.dump(2);
}

std::string kpi_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "protocol,notion,case,feasible,pax_hours,veh_hours,n_groups,objective,ratio\n";
  out.precision(10);
  for (const auto& row : result.rows) {
    out << to_string(row.protocol) << ',' << to_string(row.notion) << ',' << row.scenario_case
        << ',' << (row.feasible ? 1 : 0) << ',' << row.pax_hours << ',' << row.veh_hours << ','
        << row.n_groups << ',' << row.objective << ',';
    if (row.ratio) out << *row.ratio;
    out << '\n';
  }
  return out.str();
}

}  // namespace ctg
