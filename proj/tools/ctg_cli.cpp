// Command-line front end: demand generation, catalog generation, cost-share
// tables, equilibrium pruning/verification, exact solves, and the full
// experiment sweep.

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ctg/equilibria.hpp"
#include "ctg/feasibility.hpp"
#include "ctg/io.hpp"
#include "ctg/money.hpp"
#include "ctg/protocols.hpp"
#include "ctg/report.hpp"
#include "ctg/scenario.hpp"
#include "ctg/solver.hpp"

namespace {

using namespace ctg;

Metric metric_from_string(const std::string& s) {
  if (s == "euclidean") return Metric::euclidean;
  if (s == "manhattan") return Metric::manhattan;
  throw parse_error("unknown metric: " + s);
}

std::vector<Protocol> parse_protocols(const std::string& arg) {
  if (arg == "all") {
    return {Protocol::externality, Protocol::residual, Protocol::subgroup};
  }
  std::vector<Protocol> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(protocol_from_string(item));
  return out;
}

std::vector<EquilibriumNotion> parse_notions(const std::string& arg) {
  std::vector<EquilibriumNotion> out;
  if (arg == "all") return {EquilibriumNotion::TNE, EquilibriumNotion::RHE,
                            EquilibriumNotion::RUE, EquilibriumNotion::RSIE};
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(notion_from_string(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-travellers game toolkit: feasible groups, cost-sharing protocols, "
               "equilibrium analysis, exact matching"};
  app.require_subcommand(1);

  // demand
  auto* demand = app.add_subcommand("demand", "Generate a seeded synthetic instance");
  DemandConfig demand_config;
  CostParams demand_params;
  std::string demand_out;
  std::string demand_model = "box";
  std::string demand_dest = "uniform";
  demand->add_option("--n", demand_config.n_riders, "Number of riders");
  demand->add_option("--window", demand_config.window_seconds, "Departure window, seconds");
  demand->add_option("--seed", demand_config.seed, "RNG seed");
  demand->add_option("--model", demand_model, "City model: box|ring-radial");
  demand->add_option("--dest-mode", demand_dest, "Destinations: uniform|common-center");
  demand->add_option("--width", demand_config.width_km, "Box width, km");
  demand->add_option("--height", demand_config.height_km, "Box height, km");
  demand->add_option("--beta-t", demand_params.beta_t, "In-vehicle value of time, money/h");
  demand->add_option("--beta-w", demand_params.beta_w, "Waiting value of time, money/h");
  demand->add_option("--beta-l", demand_params.beta_l, "Operator distance cost, money/km");
  demand->add_option("--beta-v", demand_params.beta_v, "Fixed ride cost");
  demand->add_option("--c-s", demand_params.c_s, "Societal cost per group");
  demand->add_option("-o,--output", demand_out, "Instance JSON path")->required();

  // generate
  auto* generate = app.add_subcommand("generate", "Enumerate the feasible-group catalog");
  std::string gen_instance, gen_out, gen_metric = "euclidean";
  FeasibilityParams gen_params;
  generate->add_option("--instance", gen_instance, "Instance JSON")->required();
  generate->add_option("--capacity", gen_params.capacity, "Max group size");
  generate->add_option("--detour-factor", gen_params.detour_factor, "Detour factor");
  generate->add_option("--metric", gen_metric, "euclidean|manhattan");
  generate->add_option("--speed", gen_params.speed_kmh, "Vehicle speed, km/h");
  generate->add_option("-o,--output", gen_out, "Catalog JSON path")->required();

  // shares
  auto* shares = app.add_subcommand("shares", "Build a cost-share table");
  std::string sh_catalog, sh_out, sh_protocol, sh_weighting = "proportional";
  double sh_d = -1.0;
  shares->add_option("--catalog", sh_catalog, "Catalog JSON")->required();
  shares->add_option("--protocol", sh_protocol,
                     "externality|externality-over|residual|subgroup")->required();
  shares->add_option("--weighting", sh_weighting, "proportional|uniform (residual only)");
  shares->add_option("--overcharge-d", sh_d, "Overcharge constant D (externality-over)");
  shares->add_option("-o,--output", sh_out, "Shares JSON path")->required();

  // prune
  auto* prune = app.add_subcommand("prune", "Keep only TNE or hermetic groups");
  std::string pr_catalog, pr_shares, pr_notion, pr_out;
  prune->add_option("--catalog", pr_catalog, "Catalog JSON")->required();
  prune->add_option("--shares", pr_shares, "Shares JSON")->required();
  prune->add_option("--notion", pr_notion, "tne|rhe")->required();
  prune->add_option("-o,--output", pr_out, "Pruned catalog JSON path")->required();

  // exclusions
  auto* exclusions = app.add_subcommand("exclusions", "Mutually exclusive group pairs");
  std::string ex_catalog, ex_shares, ex_notion, ex_out;
  exclusions->add_option("--catalog", ex_catalog, "Catalog JSON")->required();
  exclusions->add_option("--shares", ex_shares, "Shares JSON")->required();
  exclusions->add_option("--notion", ex_notion, "rue|rsie")->required();
  exclusions->add_option("-o,--output", ex_out, "Pairs JSON path")->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Check a matching against a notion");
  std::string vf_catalog, vf_shares, vf_matching, vf_notion;
  verify_cmd->add_option("--catalog", vf_catalog, "Catalog JSON")->required();
  verify_cmd->add_option("--shares", vf_shares, "Shares JSON")->required();
  verify_cmd->add_option("--matching", vf_matching, "Matching JSON")->required();
  verify_cmd->add_option("--notion", vf_notion, "tne|rhe|rue|rsie|tse")->required();

  // exists
  auto* exists = app.add_subcommand("exists", "Exhaustive equilibrium existence check");
  std::string exq_catalog, exq_shares, exq_notion;
  int exq_guard = 12;
  exists->add_option("--catalog", exq_catalog, "Catalog JSON")->required();
  exists->add_option("--shares", exq_shares, "Shares JSON")->required();
  exists->add_option("--notion", exq_notion, "tne|rhe|rue|rsie|tse")->required();
  exists->add_option("--max-riders", exq_guard, "Guard for the exhaustive search");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Exact constrained matching");
  std::string sv_catalog, sv_shares, sv_notion = "none", sv_objective = "min", sv_out;
  solve_cmd->add_option("--catalog", sv_catalog, "Catalog JSON")->required();
  solve_cmd->add_option("--shares", sv_shares, "Shares JSON (needed unless notion=none)");
  solve_cmd->add_option("--notion", sv_notion, "none|tne|rhe|rue|rsie");
  solve_cmd->add_option("--objective", sv_objective, "min|max");
  solve_cmd->add_option("-o,--output", sv_out, "Result JSON path")->required();

  // ordinal
  auto* ordinal = app.add_subcommand("ordinal", "Embed a preference-list instance");
  std::string od_input, od_catalog_out, od_shares_out;
  double od_d = 0.0;
  ordinal->add_option("--input", od_input, "Ordinal JSON")->required();
  ordinal->add_option("--d", od_d, "Shift constant D (0 picks a safe default)");
  ordinal->add_option("-o,--catalog-out", od_catalog_out, "Catalog JSON path")->required();
  ordinal->add_option("--shares-out", od_shares_out, "Shares JSON path")->required();

  // report
  auto* report = app.add_subcommand("report", "Protocol x notion experiment sweep");
  std::string rp_instance, rp_protocols = "all", rp_notions = "rhe,rue,rsie", rp_dir;
  std::string rp_metric = "euclidean";
  FeasibilityParams rp_params;
  report->add_option("--instance", rp_instance, "Instance JSON")->required();
  report->add_option("--protocols", rp_protocols, "all or comma list");
  report->add_option("--notions", rp_notions, "all or comma list");
  report->add_option("--capacity", rp_params.capacity, "Max group size");
  report->add_option("--detour-factor", rp_params.detour_factor, "Detour factor");
  report->add_option("--metric", rp_metric, "euclidean|manhattan");
  report->add_option("--speed", rp_params.speed_kmh, "Vehicle speed, km/h");
  report->add_option("--out-dir", rp_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (demand->parsed()) {
      demand_config.model =
          demand_model == "ring-radial" ? CityModel::ring_radial : CityModel::box;
      demand_config.destination_mode = demand_dest == "common-center"
                                           ? DestinationMode::common_center
                                           : DestinationMode::uniform;
      Instance instance{demand_params, generate_demand(demand_config)};
      save_instance(demand_out, instance);
      std::cout << "wrote " << instance.requests.size() << " requests to " << demand_out
                << "\n";
    } else if (generate->parsed()) {
      gen_params.metric = metric_from_string(gen_metric);
      const Instance instance = load_instance(gen_instance);
      const GroupCatalog catalog =
          enumerate_feasible_groups(instance.requests, instance.params, gen_params);
      save_catalog(gen_out, catalog);
      std::cout << "wrote " << catalog.size() << " groups to " << gen_out << "\n";
    } else if (shares->parsed()) {
      const GroupCatalog catalog = load_catalog(sh_catalog);
      ProtocolOptions options;
      options.weighting = sh_weighting == "uniform" ? ResidualWeighting::uniform
                                                    : ResidualWeighting::proportional;
      if (sh_d >= 0.0) options.overcharge_d = sh_d;
      const CostShareTable table =
          build_share_table(catalog, protocol_from_string(sh_protocol), options);
      save_shares(sh_out, table);
      std::cout << "wrote shares (" << table.protocol() << ") to " << sh_out << "\n";
    } else if (prune->parsed()) {
      const GroupCatalog catalog = load_catalog(pr_catalog);
      const CostShareTable table = load_shares(pr_shares, catalog);
      std::vector<int> kept;
      if (pr_notion == "tne") {
        kept = tne_groups(table);
      } else if (pr_notion == "rhe") {
        for (int g = 0; g < catalog.size(); ++g) {
          if (is_hermetic(catalog[g].members, table)) kept.push_back(g);
        }
      } else {
        throw parse_error("prune expects --notion tne|rhe");
      }
      GroupCatalog pruned(catalog.n_riders());
      for (int g : kept) pruned.add(catalog[g]);
      save_catalog(pr_out, pruned);
      std::cout << "kept " << pruned.size() << " of " << catalog.size() << " groups\n";
    } else if (exclusions->parsed()) {
      const GroupCatalog catalog = load_catalog(ex_catalog);
      const CostShareTable table = load_shares(ex_shares, catalog);
      ExclusionPairs pairs;
      if (ex_notion == "rue") {
        pairs = mergeable_pairs(table, tne_groups(table));
      } else if (ex_notion == "rsie") {
        pairs = individually_unstable_pairs(table);
      } else {
        throw parse_error("exclusions expects --notion rue|rsie");
      }
      write_text_file(ex_out, exclusions_to_json_text(pairs, catalog));
      std::cout << "wrote " << pairs.pairs.size() << " pairs to " << ex_out << "\n";
    } else if (verify_cmd->parsed()) {
      const GroupCatalog catalog = load_catalog(vf_catalog);
      const CostShareTable table = load_shares(vf_shares, catalog);
      const Matching m = matching_from_json_text(read_text_file(vf_matching), catalog);
      const bool ok = verify(m, notion_from_string(vf_notion), table);
      std::cout << (ok ? "equilibrium" : "not an equilibrium") << "\n";
      return ok ? 0 : 1;
    } else if (exists->parsed()) {
      const GroupCatalog catalog = load_catalog(exq_catalog);
      const CostShareTable table = load_shares(exq_shares, catalog);
      const auto witness =
          exists_equilibrium(notion_from_string(exq_notion), table, exq_guard);
      if (witness) {
        std::cout << matching_to_json_text(*witness, catalog) << "\n";
        return 0;
      }
      std::cout << "no " << exq_notion << " exists\n";
      return 1;
    } else if (solve_cmd->parsed()) {
      const GroupCatalog catalog = load_catalog(sv_catalog);
      SolveSpec spec;
      spec.catalog = &catalog;
      spec.objective = sv_objective == "max" ? Objective::maximize : Objective::minimize;
      CostShareTable table;  // keep alive alongside spec
      if (sv_notion != "none") {
        if (sv_shares.empty()) throw parse_error("solve with a notion needs --shares");
        table = load_shares(sv_shares, catalog);
        spec = constrained_spec(table, notion_from_string(sv_notion),
                                spec.objective);
      }
      const SolveResult result = solve(spec);
      write_text_file(sv_out, solve_result_to_json_text(result, catalog));
      if (result.status == SolveStatus::optimal) {
        std::cout << "objective " << result.objective_value << " with "
                  << result.matching.selected.size() << " groups\n";
      } else {
        std::cout << "infeasible\n";
        return 2;
      }
    } else if (ordinal->parsed()) {
      const OrdinalInstance instance = ordinal_from_json_text(read_text_file(od_input));
      const double d = od_d > 0.0 ? od_d : ordinal_min_d(instance) + 1.0;
      GroupCatalog catalog;
      const CostShareTable table = ordinal_to_cardinal(instance, d, catalog);
      save_catalog(od_catalog_out, catalog);
      save_shares(od_shares_out, table);
      std::cout << "wrote " << catalog.size() << " groups (D=" << d << ")\n";
    } else if (report->parsed()) {
      rp_params.metric = metric_from_string(rp_metric);
      const Instance instance = load_instance(rp_instance);
      const auto protocols = parse_protocols(rp_protocols);
      const auto notions = parse_notions(rp_notions);
      const ExperimentResult result = run_experiment(instance, rp_params, protocols, notions);

      std::filesystem::create_directories(rp_dir);
      const auto dir = std::filesystem::path(rp_dir);
      write_text_file((dir / "kpi.csv").string(), kpi_csv(result));

      const GroupCatalog catalog =
          enumerate_feasible_groups(instance.requests, instance.params, rp_params);
      const ShareabilityGraph graph = shareability_graph(catalog);
      write_text_file((dir / "shareability.dot").string(), shareability_to_dot(graph));
      write_text_file((dir / "shareability.json").string(), shareability_to_json_text(graph));

      std::ostringstream coverage;
      coverage << "protocol,notion,coverage_ratio\n";
      coverage.precision(10);
      for (Protocol protocol : protocols) {
        const CostShareTable table = build_share_table(catalog, protocol);
        for (EquilibriumNotion notion : notions) {
          const SolveResult best = solve(constrained_spec(table, notion, Objective::minimize));
          if (best.status != SolveStatus::optimal) continue;
          coverage << to_string(protocol) << ',' << to_string(notion) << ','
                   << coverage_ratio(best.matching, table) << '\n';
          std::ostringstream regret;
          regret << "regret,cdf\n";
          regret.precision(10);
          for (const auto& [r, q] : regret_cdf(best.matching, table)) {
            regret << r << ',' << q << '\n';
          }
          const std::string cell = to_string(protocol) + "_" + to_string(notion);
          write_text_file((dir / ("regret_" + cell + ".csv")).string(), regret.str());
        }
      }
      write_text_file((dir / "coverage.csv").string(), coverage.str());

      std::cout << kpi_csv(result);
      if (result.any_infeasible) {
        std::cerr << "at least one cell is infeasible\n";
        return 2;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
