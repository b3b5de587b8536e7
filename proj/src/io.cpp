#include "ctg/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ctg {

using nlohmann::json;

namespace {

json members_to_json(const Members& m) { return json(m); }

Members members_from_json(const json& j) {
  Members m = j.get<Members>();
  std::sort(m.begin(), m.end());
  return m;
}

}  // namespace

std::string instance_to_json_text(const Instance& instance) {
  json j;
  j["params"] = {{"beta_t", instance.params.beta_t}, {"beta_w", instance.params.beta_w},
                 {"beta_l", instance.params.beta_l}, {"beta_v", instance.params.beta_v},
                 {"c_s", instance.params.c_s}};
  j["requests"] = json::array();
  for (const auto& req : instance.requests) {
    j["requests"].push_back({{"id", req.id},
                             {"ox", req.origin.x},
                             {"oy", req.origin.y},
                             {"dx", req.destination.x},
                             {"dy", req.destination.y},
                             {"depart_at", req.depart_at}});
  }
  return j.dump(2);
}

Instance instance_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("instance JSON: ") + e.what());
  }
  Instance instance;
  try {
    const auto& p = j.at("params");
    instance.params.beta_t = p.at("beta_t").get<double>();
    instance.params.beta_w = p.at("beta_w").get<double>();
    instance.params.beta_l = p.at("beta_l").get<double>();
    instance.params.beta_v = p.at("beta_v").get<double>();
    instance.params.c_s = p.value("c_s", 0.0);
    int row = 0;
    for (const auto& r : j.at("requests")) {
      TripRequest req;
      try {
        req.id = r.at("id").get<int>();
        req.origin = Vec2{r.at("ox").get<double>(), r.at("oy").get<double>()};
        req.destination = Vec2{r.at("dx").get<double>(), r.at("dy").get<double>()};
        req.depart_at = r.at("depart_at").get<double>();
      } catch (const json::exception& e) {
        throw parse_error("instance JSON: request " + std::to_string(row) + ": " + e.what());
      }
      instance.requests.push_back(req);
      ++row;
    }
  } catch (const json::exception& e) {
    throw parse_error(std::string("instance JSON: ") + e.what());
  }
  validate_requests(instance.requests);
  return instance;
}

std::string catalog_to_json_text(const GroupCatalog& catalog) {
  json j = json::array();
  for (const auto& g : catalog.groups()) {
    json direct = json::object();
    for (const auto& [rider, cost] : g.direct_costs) {
      direct[std::to_string(rider)] = cost;
    }
    json entry = {{"members", members_to_json(g.members)},
                  {"total_cost", g.total_cost},
                  {"direct_costs", direct},
                  {"operator_cost", g.operator_cost},
                  {"societal_cost", g.societal_cost}};
    if (g.closure_inserted) entry["closure_inserted"] = true;
    j.push_back(entry);
  }
  return j.dump(2);
}

GroupCatalog catalog_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("catalog JSON: ") + e.what());
  }
  if (!j.is_array()) throw parse_error("catalog JSON: expected a top-level array");

  std::vector<Group> groups;
  int entry_idx = 0;
  for (const auto& entry : j) {
    Group g;
    try {
      g.members = members_from_json(entry.at("members"));
      g.total_cost = entry.at("total_cost").get<double>();
      for (const auto& [key, value] : entry.at("direct_costs").items()) {
        g.direct_costs[std::stoi(key)] = value.get<double>();
      }
      g.operator_cost = entry.at("operator_cost").get<double>();
      g.societal_cost = entry.value("societal_cost", 0.0);
      g.closure_inserted = entry.value("closure_inserted", false);
    } catch (const std::exception& e) {
      throw parse_error("catalog JSON: entry " + std::to_string(entry_idx) + ": " + e.what());
    }
    groups.push_back(std::move(g));
    ++entry_idx;
  }
  int n = 0;
  for (const auto& g : groups) n = std::max(n, g.members.back() + 1);
  GroupCatalog catalog(n);
  for (auto& g : groups) catalog.add(std::move(g));
  catalog.validate();
  return catalog;
}

std::string shares_to_json_text(const CostShareTable& table) {
  const auto& catalog = table.catalog();
  json entries = json::array();
  for (int g = 0; g < catalog.size(); ++g) {
    entries.push_back({{"group_members", members_to_json(catalog[g].members)},
                       {"per_rider_share", table.group_shares(g)}});
  }
  json j = {{"protocol", table.protocol()},
            {"budget_mode", to_string(table.budget_mode())},
            {"entries", entries}};
  return j.dump(2);
}

CostShareTable shares_from_json_text(const std::string& text, const GroupCatalog& catalog) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("shares JSON: ") + e.what());
  }
  try {
    CostShareTable table(catalog, j.at("protocol").get<std::string>(),
                         budget_mode_from_string(j.at("budget_mode").get<std::string>()));
    for (const auto& entry : j.at("entries")) {
      const Members members = members_from_json(entry.at("group_members"));
      table.set_group_shares(catalog.require(members),
                             entry.at("per_rider_share").get<std::vector<double>>());
    }
    table.validate();
    return table;
  } catch (const json::exception& e) {
    throw parse_error(std::string("shares JSON: ") + e.what());
  }
}

std::string matching_to_json_text(const Matching& matching, const GroupCatalog& catalog) {
  json groups = json::array();
  for (int g : matching.selected) groups.push_back(members_to_json(catalog[g].members));
  return json{{"groups", groups}}.dump(2);
}

Matching matching_from_json_text(const std::string& text, const GroupCatalog& catalog) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("matching JSON: ") + e.what());
  }
  Matching m;
  for (const auto& entry : j.at("groups")) {
    m.selected.push_back(catalog.require(members_from_json(entry)));
  }
  std::sort(m.selected.begin(), m.selected.end());
  return m;
}

std::string exclusions_to_json_text(const ExclusionPairs& pairs, const GroupCatalog& catalog) {
  json out;
  out["kind"] = pairs.kind == ExclusionKind::mergeable ? "mergeable" : "individually_unstable";
  out["pairs"] = json::array();
  for (const auto& [a, b] : pairs.pairs) {
    out["pairs"].push_back({{"a", members_to_json(catalog[a].members)},
                            {"b", members_to_json(catalog[b].members)}});
  }
  return out.dump(2);
}

std::string solve_result_to_json_text(const SolveResult& result, const GroupCatalog& catalog) {
  json j;
  j["status"] = result.status == SolveStatus::optimal ? "optimal" : "infeasible";
  j["nodes"] = result.nodes_explored;
  j["seconds"] = result.wall_time_seconds;
  if (result.status == SolveStatus::optimal) {
    j["objective"] = result.objective_value;
    json groups = json::array();
    for (int g : result.matching.selected) groups.push_back(members_to_json(catalog[g].members));
    j["groups"] = groups;
  }
  return j.dump(2);
}

std::string ordinal_to_json_text(const OrdinalInstance& instance) {
  json j;
  j["riders"] = instance.riders;
  j["feasible"] = json::array();
  for (const auto& g : instance.feasible) j["feasible"].push_back(members_to_json(g));
  j["pref"] = instance.pref;
  return j.dump(2);
}

OrdinalInstance ordinal_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(std::string("ordinal JSON: ") + e.what());
  }
  OrdinalInstance instance;
  try {
    instance.riders = j.at("riders").get<int>();
    for (const auto& g : j.at("feasible")) instance.feasible.push_back(members_from_json(g));
    instance.pref = j.at("pref").get<std::vector<std::vector<int>>>();
  } catch (const json::exception& e) {
    throw parse_error(std::string("ordinal JSON: ") + e.what());
  }
  validate_ordinal(instance);
  return instance;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw error("cannot write file: " + path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

GroupCatalog load_catalog(const std::string& path) {
  try {
    return catalog_from_json_text(read_text_file(path));
  } catch (const parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

void save_catalog(const std::string& path, const GroupCatalog& catalog) {
  write_text_file(path, catalog_to_json_text(catalog));
}

CostShareTable load_shares(const std::string& path, const GroupCatalog& catalog) {
  try {
    return shares_from_json_text(read_text_file(path), catalog);
  } catch (const parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

void save_shares(const std::string& path, const CostShareTable& table) {
  write_text_file(path, shares_to_json_text(table));
}

}  // namespace ctg
