#include "ctg/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ctg/money.hpp"

namespace ctg {

std::string members_to_string(const Members& m) {
  std::ostringstream out;
  out << "{";
  for (size_t i = 0; i < m.size(); ++i) {
    if (i) out << ",";
    out << m[i];
  }
  out << "}";
  return out.str();
}

void validate_requests(const std::vector<TripRequest>& requests) {
  for (size_t i = 0; i < requests.size(); ++i) {
    const auto& r = requests[i];
    if (r.id != static_cast<int>(i)) {
      throw error("request ids must be dense 0..n-1; slot " + std::to_string(i) +
                  " holds id " + std::to_string(r.id));
    }
    if (r.origin.x == r.destination.x && r.origin.y == r.destination.y) {
      throw error("request " + std::to_string(r.id) + " has origin == destination");
    }
  }
}

bool Group::contains(int rider) const {
  return std::binary_search(members.begin(), members.end(), rider);
}

double Group::direct_cost(int rider) const {
  auto it = direct_costs.find(rider);
  if (it == direct_costs.end()) {
    throw rider_not_in_group_error("rider " + std::to_string(rider) +
                                   " not in group " + members_to_string(members));
  }
  return it->second;
}

int GroupCatalog::add(Group g) {
  if (g.members.empty()) throw error("cannot add an empty group");
  if (!std::is_sorted(g.members.begin(), g.members.end()) ||
      std::adjacent_find(g.members.begin(), g.members.end()) != g.members.end()) {
    throw error("group members must be sorted and unique: " + members_to_string(g.members));
  }
  if (index_.count(g.members)) {
    throw error("duplicate group " + members_to_string(g.members));
  }
  n_riders_ = std::max(n_riders_, g.members.back() + 1);
  const int idx = static_cast<int>(groups_.size());
  index_.emplace(g.members, idx);
  groups_.push_back(std::move(g));
  return idx;
}

std::optional<int> GroupCatalog::find(const Members& members) const {
  auto it = index_.find(members);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int GroupCatalog::require(const Members& members) const {
  auto idx = find(members);
  if (!idx) throw unknown_group_error("group " + members_to_string(members) + " not in catalog");
  return *idx;
}

double GroupCatalog::total_cost(const Members& members) const {
  if (members.empty()) return 0.0;  // c(empty) = 0
  return groups_.at(require(members)).total_cost;
}

int GroupCatalog::singleton_index(int rider) const {
  return require(Members{rider});
}

std::vector<std::vector<int>> GroupCatalog::groups_by_rider() const {
  std::vector<std::vector<int>> by_rider(n_riders_);
  for (int g = 0; g < size(); ++g) {
    for (int rider : groups_[g].members) by_rider.at(rider).push_back(g);
  }
  return by_rider;
}

void GroupCatalog::validate() const {
  for (int rider = 0; rider < n_riders_; ++rider) {
    if (!contains(Members{rider})) {
      throw error("catalog is missing singleton {" + std::to_string(rider) + "}");
    }
  }
  for (const auto& g : groups_) {
    double direct_sum = 0.0;
    for (int rider : g.members) direct_sum += g.direct_cost(rider);
    const double residual =
        g.total_cost - direct_sum - g.operator_cost - g.societal_cost;
    if (std::fabs(residual) > money::kEpsIdentity) {
      throw error("group " + members_to_string(g.members) +
                  " violates the cost decomposition by " + std::to_string(residual));
    }
  }
}

bool GroupCatalog::is_subset_closed() const {
  for (const auto& g : groups_) {
    bool ok = true;
    for_each_subset(g.members, false, [&](const Members& h) {
      if (!contains(h)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

bool GroupCatalog::is_monotone() const {
  for (const auto& g : groups_) {
    bool ok = true;
    for_each_subset(g.members, false, [&](const Members& h) {
      auto idx = find(h);
      if (idx && !money::leq(groups_[*idx].total_cost, g.total_cost)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

double total_cost(const GroupCatalog& catalog, const Members& members) {
  if (!members.empty()) catalog.require(members);  // unknown-group error
  return catalog.total_cost(members);
}

ValidityReport validate_matching(const Matching& matching, const GroupCatalog& catalog) {
  ValidityReport report;
  std::vector<int> cover(catalog.n_riders(), 0);
  for (int idx : matching.selected) {
    for (int rider : catalog[idx].members) ++cover[rider];
  }
  for (int rider = 0; rider < catalog.n_riders(); ++rider) {
    if (cover[rider] == 0) report.uncovered.push_back(rider);
    if (cover[rider] > 1) report.overcovered.push_back(rider);
  }
  report.valid = report.uncovered.empty() && report.overcovered.empty();
  return report;
}

std::string to_string(BudgetMode mode) {
  switch (mode) {
    case BudgetMode::balanced: return "balanced";
    case BudgetMode::overcharging: return "overcharging";
    case BudgetMode::unconstrained: return "unconstrained";
  }
  return "unconstrained";
}

BudgetMode budget_mode_from_string(const std::string& s) {
  if (s == "balanced") return BudgetMode::balanced;
  if (s == "overcharging") return BudgetMode::overcharging;
  if (s == "unconstrained") return BudgetMode::unconstrained;
  throw parse_error("unknown budget mode: " + s);
}

CostShareTable::CostShareTable(const GroupCatalog& catalog, std::string protocol,
                               BudgetMode mode)
    : catalog_(&catalog),
      shares_(catalog.size()),
      protocol_(std::move(protocol)),
      budget_mode_(mode) {}

void CostShareTable::set_group_shares(int group_idx, std::vector<double> shares) {
  const auto& group = (*catalog_)[group_idx];
  if (shares.size() != group.members.size()) {
    throw error("share vector size mismatch for group " + members_to_string(group.members));
  }
  shares_.at(group_idx) = std::move(shares);
}

double CostShareTable::share(int group_idx, int rider) const {
  const auto& members = (*catalog_)[group_idx].members;
  auto it = std::lower_bound(members.begin(), members.end(), rider);
  if (it == members.end() || *it != rider) {
    throw rider_not_in_group_error("rider " + std::to_string(rider) + " not in group " +
                                   members_to_string(members));
  }
  return shares_.at(group_idx).at(it - members.begin());
}

const std::vector<double>& CostShareTable::group_shares(int group_idx) const {
  return shares_.at(group_idx);
}

double CostShareTable::solo_share(int rider) const {
  return share(catalog_->singleton_index(rider), rider);
}

double CostShareTable::fare(int group_idx, int rider) const {
  return share(group_idx, rider) - (*catalog_)[group_idx].direct_cost(rider);
}

const GroupCatalog& CostShareTable::catalog() const {
  if (!catalog_) throw error("cost-share table is not bound to a catalog");
  return *catalog_;
}

void CostShareTable::validate() const {
  const auto& cat = catalog();
  for (int g = 0; g < cat.size(); ++g) {
    if (shares_.at(g).size() != cat[g].members.size()) {
      throw error("missing shares for group " + members_to_string(cat[g].members));
    }
    double sum = 0.0;
    for (double s : shares_[g]) sum += s;
    const double c = cat[g].total_cost;
    if (budget_mode_ == BudgetMode::balanced && !money::eq(sum, c)) {
      throw error("group " + members_to_string(cat[g].members) +
                  " breaks budget balance: shares sum to " + std::to_string(sum));
    }
    if (budget_mode_ == BudgetMode::overcharging && sum < c - money::kEpsIdentity) {
      throw error("group " + members_to_string(cat[g].members) +
                  " under-collects an overcharging table");
    }
  }
}

std::string to_string(EquilibriumNotion notion) {
  switch (notion) {
    case EquilibriumNotion::TNE: return "tne";
    case EquilibriumNotion::RHE: return "rhe";
    case EquilibriumNotion::RUE: return "rue";
    case EquilibriumNotion::RSIE: return "rsie";
    case EquilibriumNotion::TSE: return "tse";
  }
  return "tne";
}

EquilibriumNotion notion_from_string(const std::string& s) {
  if (s == "tne") return EquilibriumNotion::TNE;
  if (s == "rhe") return EquilibriumNotion::RHE;
  if (s == "rue") return EquilibriumNotion::RUE;
  if (s == "rsie") return EquilibriumNotion::RSIE;
  if (s == "tse") return EquilibriumNotion::TSE;
  throw parse_error("unknown equilibrium notion: " + s);
}

bool is_subset(const Members& a, const Members& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool are_disjoint(const Members& a, const Members& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return false;
    if (*ia < *ib) ++ia;
    else ++ib;
  }
  return true;
}

Members set_union(const Members& a, const Members& b) {
  Members out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Members set_difference(const Members& a, const Members& b) {
  Members out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace ctg
