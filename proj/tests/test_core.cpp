#include <doctest.h>

#include "ctg/core.hpp"
#include "ctg/money.hpp"
#include "support/worked_example.hpp"

using namespace ctg;
using namespace ctg::testsupport;

TEST_SUITE("core") {

TEST_CASE("stored group costs match the published table") {
  const GroupCatalog catalog = worked_example_catalog();
  CHECK(total_cost(catalog, {1, 2}) == doctest::Approx(26.08));  // riders 2,3
  CHECK(total_cost(catalog, {0, 1}) == doctest::Approx(31.0));
  CHECK(total_cost(catalog, {2}) == doctest::Approx(9.24));
  CHECK_THROWS_AS(total_cost(catalog, {0, 1, 2, 3}), unknown_group_error);
}

TEST_CASE("singleton total is direct plus operator cost") {
  const GroupCatalog catalog = worked_example_catalog();
  for (int rider = 0; rider < 3; ++rider) {
    const auto& g = catalog[catalog.singleton_index(rider)];
    CHECK(g.total_cost ==
          doctest::Approx(g.direct_cost(rider) + g.operator_cost + g.societal_cost));
  }
}

TEST_CASE("cost decomposition holds for every fixture group") {
  const GroupCatalog catalog = worked_example_catalog();
  CHECK_NOTHROW(catalog.validate());
  for (const auto& g : catalog.groups()) {
    double direct_sum = 0.0;
    for (int rider : g.members) direct_sum += g.direct_cost(rider);
    CHECK(std::fabs(g.total_cost - direct_sum - g.operator_cost - g.societal_cost) <=
          money::kEpsIdentity);
  }
}

TEST_CASE("validate_matching accepts the partition and reports violations") {
  const GroupCatalog catalog = worked_example_catalog();
  const int g01 = catalog.require({0, 1});
  const int g12 = catalog.require({1, 2});
  const int s2 = catalog.require({2});

  SUBCASE("valid partition") {
    const auto report = validate_matching(Matching{{g01, s2}}, catalog);
    CHECK(report.valid);
    CHECK(report.uncovered.empty());
    CHECK(report.overcovered.empty());
  }
  SUBCASE("overlap is over-coverage") {
    const auto report = validate_matching(Matching{{g01, g12}}, catalog);
    CHECK_FALSE(report.valid);
    CHECK(report.overcovered == std::vector<int>{1});
  }
  SUBCASE("missing rider is under-coverage") {
    const auto report =
        validate_matching(Matching{{catalog.require({0}), catalog.require({1})}}, catalog);
    CHECK_FALSE(report.valid);
    CHECK(report.uncovered == std::vector<int>{2});
  }
}

TEST_CASE("catalog rejects malformed groups") {
  GroupCatalog catalog(2);
  CHECK_THROWS_AS(catalog.add(Group{}), error);
  Group unsorted;
  unsorted.members = {1, 0};
  CHECK_THROWS_AS(catalog.add(unsorted), error);
}

TEST_CASE("share table budget modes are enforced by validate") {
  const GroupCatalog catalog = worked_example_catalog();
  CostShareTable table(catalog, "test", BudgetMode::balanced);
  for (int g = 0; g < catalog.size(); ++g) {
    const auto& members = catalog[g].members;
    std::vector<double> shares(members.size(),
                               catalog[g].total_cost / static_cast<double>(members.size()));
    table.set_group_shares(g, shares);
  }
  CHECK_NOTHROW(table.validate());

  auto shares = table.group_shares(catalog.require({0, 1}));
  shares[0] += 0.5;
  table.set_group_shares(catalog.require({0, 1}), shares);
  CHECK_THROWS_AS(table.validate(), error);
}

TEST_CASE("fare is the share net of direct time costs") {
  const GroupCatalog catalog = worked_example_catalog();
  CostShareTable table = cycling_share_table(catalog);
  // Rider 1's direct cost in {0,1} is 8; the fixture charges her 8.01.
  CHECK(table.fare(catalog.require({0, 1}), 1) == doctest::Approx(0.01));
}

TEST_CASE("set helpers") {
  CHECK(is_subset({1, 3}, {0, 1, 2, 3}));
  CHECK_FALSE(is_subset({1, 4}, {0, 1, 2, 3}));
  CHECK(are_disjoint({0, 2}, {1, 3}));
  CHECK_FALSE(are_disjoint({0, 2}, {2, 3}));
  CHECK(set_union({0, 2}, {1}) == Members{0, 1, 2});
  CHECK(set_difference({0, 1, 2}, {1}) == Members{0, 2});
}

}  // TEST_SUITE
