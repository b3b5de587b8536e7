#pragma once

#include <string>
#include <utility>

#include "ctg/core.hpp"
#include "ctg/equilibria.hpp"
#include "ctg/scenario.hpp"
#include "ctg/solver.hpp"

namespace ctg {

// JSON codecs for the on-disk artifacts. All exports are deterministic:
// object keys and member lists come out sorted.

std::string instance_to_json_text(const Instance& instance);
Instance instance_from_json_text(const std::string& text);

std::string catalog_to_json_text(const GroupCatalog& catalog);
GroupCatalog catalog_from_json_text(const std::string& text);

std::string shares_to_json_text(const CostShareTable& table);
// The table is rebound to `catalog`, matching entries by member set.
CostShareTable shares_from_json_text(const std::string& text, const GroupCatalog& catalog);

std::string matching_to_json_text(const Matching& matching, const GroupCatalog& catalog);
Matching matching_from_json_text(const std::string& text, const GroupCatalog& catalog);

std::string exclusions_to_json_text(const ExclusionPairs& pairs, const GroupCatalog& catalog);

std::string solve_result_to_json_text(const SolveResult& result, const GroupCatalog& catalog);

std::string ordinal_to_json_text(const OrdinalInstance& instance);
OrdinalInstance ordinal_from_json_text(const std::string& text);

// File helpers; throw parse_error / error with the path in the message.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

GroupCatalog load_catalog(const std::string& path);
void save_catalog(const std::string& path, const GroupCatalog& catalog);
CostShareTable load_shares(const std::string& path, const GroupCatalog& catalog);
void save_shares(const std::string& path, const CostShareTable& table);

}  // namespace ctg
