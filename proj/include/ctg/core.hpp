#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctg/route.hpp"

namespace ctg {

// --------------------------------------------------------------------------
// Errors

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unknown_group_error : error {
  using error::error;
};
struct missing_subset_error : error {
  using error::error;
};
struct rider_not_in_group_error : error {
  using error::error;
};
struct d_too_small_error : error {
  using error::error;
};
struct zero_singleton_cost_error : error {
  using error::error;
};
struct instance_too_large_error : error {
  using error::error;
};
struct parse_error : error {
  using error::error;
};

// --------------------------------------------------------------------------
// Domain types

// Sorted, duplicate-free rider ids.
using Members = std::vector<int>;

std::string members_to_string(const Members& m);

struct TripRequest {
  int id = 0;
  Vec2 origin;
  Vec2 destination;
  double depart_at = 0.0;  // seconds
};

// Checks ids are dense 0..n-1 and origin != destination.
void validate_requests(const std::vector<TripRequest>& requests);

struct CostParams {
  double beta_t = 9.0;    // in-vehicle value of time, money/hour
  double beta_w = 13.5;   // waiting value of time, money/hour
  double beta_l = 1.0;    // operator distance cost, money/km
  double beta_v = 1.0;    // fixed ride cost, money
  double c_s = 0.0;       // societal cost per group, money
};

struct Group {
  Members members;
  double total_cost = 0.0;             // c(G)
  std::map<int, double> direct_costs;  // C(G,i)
  double operator_cost = 0.0;          // C_O(G)
  double societal_cost = 0.0;          // C_S(G)
  Route route;                         // may be empty for imported catalogs
  bool closure_inserted = false;       // not directly feasible, priced via a superset

  int size() const { return static_cast<int>(members.size()); }
  bool contains(int rider) const;
  double direct_cost(int rider) const;  // throws rider_not_in_group_error
};

// The feasible-group family. Indexing is insertion order; lookups go through
// the member-set index. Immutable after construction apart from the closure
// pass, which rebuilds it wholesale.
class GroupCatalog {
 public:
  GroupCatalog() = default;
  explicit GroupCatalog(int n_riders) : n_riders_(n_riders) {}

  int add(Group g);

  int size() const { return static_cast<int>(groups_.size()); }
  int n_riders() const { return n_riders_; }
  const Group& operator[](int idx) const { return groups_.at(idx); }
  const std::vector<Group>& groups() const { return groups_; }

  std::optional<int> find(const Members& members) const;
  bool contains(const Members& members) const { return find(members).has_value(); }
  int require(const Members& members) const;  // throws unknown_group_error

  // c(G) by member set; c(empty) = 0.
  double total_cost(const Members& members) const;

  int singleton_index(int rider) const;
  std::vector<std::vector<int>> groups_by_rider() const;

  // Throws if ids are not dense, singletons are missing, members are not
  // sorted, or Eq.-style cost bookkeeping is violated.
  void validate() const;

  bool is_subset_closed() const;
  bool is_monotone() const;

 private:
  std::vector<Group> groups_;
  std::map<Members, int> index_;
  int n_riders_ = 0;
};

// total_cost as a free operation: stored c(G) for a catalog member set.
double total_cost(const GroupCatalog& catalog, const Members& members);

// --------------------------------------------------------------------------
// Matchings

struct Matching {
  std::vector<int> selected;  // catalog group indices, ascending
};

struct ValidityReport {
  bool valid = false;
  std::vector<int> uncovered;
  std::vector<int> overcovered;
};

ValidityReport validate_matching(const Matching& matching, const GroupCatalog& catalog);

// --------------------------------------------------------------------------
// Cost-share tables

enum class BudgetMode { balanced, overcharging, unconstrained };

std::string to_string(BudgetMode mode);
BudgetMode budget_mode_from_string(const std::string& s);

// Individual costs c_i(G) for every (group, member) pair of a catalog.
// Holds a non-owning pointer to the catalog it was built for; the catalog
// must outlive the table.
class CostShareTable {
 public:
  CostShareTable() = default;
  CostShareTable(const GroupCatalog& catalog, std::string protocol, BudgetMode mode);

  void set_group_shares(int group_idx, std::vector<double> shares);

  double share(int group_idx, int rider) const;  // c_i(G)
  const std::vector<double>& group_shares(int group_idx) const;
  double solo_share(int rider) const;  // c_i({i})

  // The implied monetary fare, f(G,i) = c_i(G) - C(G,i).
  double fare(int group_idx, int rider) const;

  const GroupCatalog& catalog() const;
  const std::string& protocol() const { return protocol_; }
  BudgetMode budget_mode() const { return budget_mode_; }

  // Throws unless every group has a full share vector and the budget
  // property of the declared mode holds.
  void validate() const;

 private:
  const GroupCatalog* catalog_ = nullptr;
  std::vector<std::vector<double>> shares_;
  std::string protocol_;
  BudgetMode budget_mode_ = BudgetMode::unconstrained;
};

// --------------------------------------------------------------------------
// Equilibrium notions

enum class EquilibriumNotion { TNE, RHE, RUE, RSIE, TSE };

std::string to_string(EquilibriumNotion notion);
EquilibriumNotion notion_from_string(const std::string& s);

// --------------------------------------------------------------------------
// Small set helpers shared across modules

bool is_subset(const Members& a, const Members& b);   // a subseteq b
bool are_disjoint(const Members& a, const Members& b);
Members set_union(const Members& a, const Members& b);
Members set_difference(const Members& a, const Members& b);

// Invokes f on every non-empty subset of members; include_full selects
// whether the full set itself is visited.
template <typename F>
void for_each_subset(const Members& members, bool include_full, F&& f) {
  const int k = static_cast<int>(members.size());
  const unsigned full = (1u << k) - 1u;
  for (unsigned mask = 1; mask <= full; ++mask) {
    if (!include_full && mask == full) continue;
    Members subset;
    for (int b = 0; b < k; ++b) {
      if (mask & (1u << b)) subset.push_back(members[b]);
    }
    f(subset);
  }
}

}  // namespace ctg
