#include <doctest.h>

#include <cmath>

#include "ctg/money.hpp"
#include "ctg/protocols.hpp"
#include "ctg/solver.hpp"
#include "support/random_instances.hpp"
#include "support/worked_example.hpp"

using namespace ctg;
using namespace ctg::testsupport;

TEST_SUITE("solver") {

TEST_CASE("demo instance: minimum and maximum partitions") {
  const GroupCatalog catalog = worked_example_catalog();
  SolveSpec spec;
  spec.catalog = &catalog;

  SUBCASE("minimize picks the pooled pair") {
    const SolveResult result = solve(spec);
    REQUIRE(result.status == SolveStatus::optimal);
    CHECK(result.objective_value == doctest::Approx(40.24));  // 31 + 9.24
    REQUIRE(result.matching.selected.size() == 2);
    CHECK(catalog[result.matching.selected[0]].members == Members{2});
    CHECK(catalog[result.matching.selected[1]].members == Members{0, 1});
  }
  SUBCASE("maximize picks everybody alone") {
    spec.objective = Objective::maximize;
    const SolveResult result = solve(spec);
    REQUIRE(result.status == SolveStatus::optimal);
    CHECK(result.objective_value == doctest::Approx(51.24));  // 23 + 19 + 9.24
    CHECK(result.matching.selected.size() == 3);
  }
}

TEST_CASE("single rider solves to her singleton") {
  GroupCatalog catalog(1);
  catalog.add(fixture_group({0}, 12.5, {4.0}, 8.5));
  SolveSpec spec;
  spec.catalog = &catalog;
  const SolveResult result = solve(spec);
  REQUIRE(result.status == SolveStatus::optimal);
  CHECK(result.objective_value == doctest::Approx(12.5));
  CHECK(result.matching.selected == std::vector<int>{0});
}

TEST_CASE("conflicting exclusions make the problem infeasible") {
  GroupCatalog catalog(2);
  catalog.add(fixture_group({0}, 5.0, {2.0}, 3.0));
  catalog.add(fixture_group({1}, 5.0, {2.0}, 3.0));
  SolveSpec spec;
  spec.catalog = &catalog;
  spec.exclusions = {{0, 1}};  // the only partition is banned
  CHECK(solve(spec).status == SolveStatus::infeasible);
  CHECK(brute_force_solve(spec).status == SolveStatus::infeasible);
}

TEST_CASE("solutions respect exclusion pairs") {
  const GroupCatalog catalog = worked_example_catalog();
  SolveSpec spec;
  spec.catalog = &catalog;
  spec.exclusions = {{catalog.require({0, 1}), catalog.require({2})}};
  const SolveResult result = solve(spec);
  REQUIRE(result.status == SolveStatus::optimal);
  for (const auto& [a, b] : spec.exclusions) {
    const bool has_a = std::find(result.matching.selected.begin(),
                                 result.matching.selected.end(), a) !=
                       result.matching.selected.end();
    const bool has_b = std::find(result.matching.selected.begin(),
                                 result.matching.selected.end(), b) !=
                       result.matching.selected.end();
    const bool both = has_a && has_b;
    CHECK_FALSE(both);
  }
  // Next best partition avoiding the pair.
  CHECK(result.objective_value == doctest::Approx(40.44));
}

TEST_CASE("minimize never exceeds maximize") {
  for (std::uint64_t seed : {301u, 302u, 303u}) {
    const GroupCatalog catalog = random_catalog(seed, 7, 3);
    SolveSpec spec;
    spec.catalog = &catalog;
    const SolveResult lo = solve(spec);
    spec.objective = Objective::maximize;
    const SolveResult hi = solve(spec);
    REQUIRE(lo.status == SolveStatus::optimal);
    REQUIRE(hi.status == SolveStatus::optimal);
    CHECK(lo.objective_value <= hi.objective_value + money::kEpsOptimal);
  }
}

TEST_CASE("solver matches the brute-force oracle on constrained problems") {
  int solved = 0;
  for (std::uint64_t seed = 400; seed < 420; ++seed) {
    const GroupCatalog catalog = random_catalog(seed, 8, 4);
    for (Protocol protocol : {Protocol::externality, Protocol::residual, Protocol::subgroup}) {
      const CostShareTable table = build_share_table(catalog, protocol);
      for (EquilibriumNotion notion :
           {EquilibriumNotion::TNE, EquilibriumNotion::RHE, EquilibriumNotion::RUE,
            EquilibriumNotion::RSIE}) {
        for (Objective objective : {Objective::minimize, Objective::maximize}) {
          SolveSpec spec = constrained_spec(table, notion, objective);
          const SolveResult fast = solve(spec);
          const SolveResult slow = brute_force_solve(spec);
          REQUIRE(fast.status == slow.status);
          if (fast.status == SolveStatus::optimal) {
            CHECK(std::fabs(fast.objective_value - slow.objective_value) <=
                  money::kEpsOptimal);
            CHECK(fast.matching.selected == slow.matching.selected);  // lex tie-break
            CHECK(validate_matching(fast.matching, catalog).valid);
          }
          ++solved;
        }
      }
    }
  }
  CHECK(solved == (20 * 3 * 4 * 2));
}

TEST_CASE("constrained matchings verify their own notion") {
  for (std::uint64_t seed : {501u, 502u, 503u, 504u}) {
    const GroupCatalog catalog = random_catalog(seed, 8, 3);
    const CostShareTable table = build_share_table(catalog, Protocol::subgroup);
    for (EquilibriumNotion notion :
         {EquilibriumNotion::TNE, EquilibriumNotion::RHE, EquilibriumNotion::RUE,
          EquilibriumNotion::RSIE}) {
      const SolveResult best = solve(constrained_spec(table, notion, Objective::minimize));
      if (best.status != SolveStatus::optimal) continue;
      CHECK(verify(best.matching, notion, table));
    }
  }
}

TEST_CASE("price ratios are ordered and at least one") {
  for (std::uint64_t seed : {601u, 602u}) {
    const GroupCatalog catalog = random_catalog(seed, 8, 3);
    for (Protocol protocol : {Protocol::externality, Protocol::residual, Protocol::subgroup}) {
      const CostShareTable table = build_share_table(catalog, protocol);
      for (EquilibriumNotion notion :
           {EquilibriumNotion::TNE, EquilibriumNotion::RHE, EquilibriumNotion::RUE,
            EquilibriumNotion::RSIE}) {
        const PosPoaResult result = pos_poa(table, notion);
        REQUIRE(result.optimum.status == SolveStatus::optimal);
        if (!result.pos) continue;
        CHECK(*result.pos >= 1.0 - money::kEpsOptimal);
        CHECK(*result.poa >= *result.pos - money::kEpsOptimal);
      }
    }
  }
}

TEST_CASE("tighter prunings cannot improve the constrained minimum") {
  for (std::uint64_t seed : {701u, 702u}) {
    const GroupCatalog catalog = random_catalog(seed, 8, 3);
    const CostShareTable table = build_share_table(catalog, Protocol::residual);
    SolveSpec unconstrained;
    unconstrained.catalog = &catalog;
    const double optimum = solve(unconstrained).objective_value;
    const double tne_best =
        solve(constrained_spec(table, EquilibriumNotion::TNE, Objective::minimize))
            .objective_value;
    const double rhe_best =
        solve(constrained_spec(table, EquilibriumNotion::RHE, Objective::minimize))
            .objective_value;
    CHECK(money::leq(optimum, tne_best, money::kEpsOptimal));
    CHECK(money::leq(tne_best, rhe_best, money::kEpsOptimal));
  }
}

TEST_CASE("brute force is guarded against large instances") {
  const GroupCatalog catalog = random_catalog(801, 13, 2, 1.2);
  SolveSpec spec;
  spec.catalog = &catalog;
  CHECK_THROWS_AS(brute_force_solve(spec, 12), instance_too_large_error);
}

TEST_CASE("greedy RUE matching cost stays between the notion bounds") {
  for (std::uint64_t seed : {901u, 902u}) {
    const GroupCatalog catalog = random_catalog(seed, 7, 3);
    const CostShareTable table = build_share_table(catalog, Protocol::residual);
    const Matching greedy = greedy_rue(table);
    double greedy_cost = 0.0;
    for (int g : greedy.selected) greedy_cost += catalog[g].total_cost;
    const PosPoaResult result = pos_poa(table, EquilibriumNotion::RUE);
    REQUIRE(result.best.status == SolveStatus::optimal);
    CHECK(money::leq(result.best.objective_value, greedy_cost, money::kEpsOptimal));
    CHECK(money::leq(greedy_cost, result.worst.objective_value, money::kEpsOptimal));
  }
}

}  // TEST_SUITE
