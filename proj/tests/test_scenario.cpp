#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "ctg/feasibility.hpp"
#include "ctg/io.hpp"
#include "ctg/protocols.hpp"
#include "ctg/rng.hpp"
#include "ctg/scenario.hpp"

using namespace ctg;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("ctg_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("same seed reproduces the request list exactly") {
  DemandConfig config;
  config.n_riders = 40;
  config.seed = 123;
  const auto a = generate_demand(config);
  const auto b = generate_demand(config);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].origin.x == b[i].origin.x);
    CHECK(a[i].origin.y == b[i].origin.y);
    CHECK(a[i].destination.x == b[i].destination.x);
    CHECK(a[i].depart_at == b[i].depart_at);
  }
  const auto c = generate_demand(DemandConfig{.n_riders = 40, .seed = 124});
  CHECK(a[0].origin.x != c[0].origin.x);
}

TEST_CASE("known seed pins the keystream") {
  // First draws of the documented generator (mt19937_64, 53-bit mantissa
  // mapping); a change here means seeds stop reproducing.
  Rng rng(42);
  CHECK(rng.uniform() == doctest::Approx(0.75515553295453897).epsilon(1e-14));
  CHECK(rng.uniform() == doctest::Approx(0.63903139385469743).epsilon(1e-14));
}

TEST_CASE("common-center mode sends everybody to one point") {
  DemandConfig config;
  config.n_riders = 12;
  config.destination_mode = DestinationMode::common_center;
  const auto requests = generate_demand(config);
  for (const auto& req : requests) {
    CHECK(req.destination.x == doctest::Approx(config.width_km / 2));
    CHECK(req.destination.y == doctest::Approx(config.height_km / 2));
  }
}

TEST_CASE("batch shape: 400 riders in a 600 second window") {
  DemandConfig config;
  config.n_riders = 400;
  config.window_seconds = 600.0;
  config.seed = 7;
  const auto requests = generate_demand(config);
  REQUIRE(requests.size() == 400);
  for (const auto& req : requests) {
    CHECK(req.depart_at >= 0.0);
    CHECK(req.depart_at <= 600.0);
  }
  CHECK_NOTHROW(validate_requests(requests));
}

TEST_CASE("ring-radial model keeps origins on the annulus") {
  DemandConfig config;
  config.n_riders = 30;
  config.model = CityModel::ring_radial;
  config.destination_mode = DestinationMode::uniform;
  const auto requests = generate_demand(config);
  for (const auto& req : requests) {
    const double r = std::hypot(req.origin.x, req.origin.y);
    CHECK(r >= config.inner_radius_km - 1e-9);
    CHECK(r <= config.outer_radius_km + 1e-9);
    CHECK(std::hypot(req.destination.x, req.destination.y) <= config.core_radius_km + 1e-6);
  }
}

TEST_CASE("instance JSON round-trip is exact") {
  TempDir dir;
  Instance instance;
  instance.params = CostParams{1.0, 1.0, 1.0, 7.0, 0.0};
  instance.requests = {
      {0, Vec2{-6.0, 0.0}, Vec2{2.0, 0.0}, 0.0},
      {1, Vec2{-4.0, 0.0}, Vec2{2.0, 0.0}, 0.0},
      {2, Vec2{0.0, -1.0}, Vec2{2.0, 0.0}, 0.0},
  };
  const std::string path = dir.file("inst.json");
  save_instance(path, instance);
  const Instance loaded = load_instance(path);
  CHECK(loaded.params.beta_v == 7.0);
  REQUIRE(loaded.requests.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(loaded.requests[i].origin.x == instance.requests[i].origin.x);
    CHECK(loaded.requests[i].destination.y == instance.requests[i].destination.y);
    CHECK(loaded.requests[i].depart_at == instance.requests[i].depart_at);
  }
}

TEST_CASE("random instance survives a JSON round-trip bit-exactly") {
  TempDir dir;
  Instance instance;
  instance.requests = generate_demand(DemandConfig{.n_riders = 25, .seed = 99});
  const std::string path = dir.file("inst.json");
  save_instance(path, instance);
  const Instance loaded = load_instance(path);
  REQUIRE(loaded.requests.size() == instance.requests.size());
  for (size_t i = 0; i < loaded.requests.size(); ++i) {
    CHECK(loaded.requests[i].origin.x == instance.requests[i].origin.x);
    CHECK(loaded.requests[i].origin.y == instance.requests[i].origin.y);
    CHECK(loaded.requests[i].destination.x == instance.requests[i].destination.x);
    CHECK(loaded.requests[i].destination.y == instance.requests[i].destination.y);
    CHECK(loaded.requests[i].depart_at == instance.requests[i].depart_at);
  }
}

TEST_CASE("CSV and JSON agree and round-trip") {
  TempDir dir;
  const auto requests = generate_demand(DemandConfig{.n_riders = 10, .seed = 5});
  const std::string path = dir.file("req.csv");
  save_requests_csv(path, requests);
  const auto loaded = load_requests_csv(path);
  REQUIRE(loaded.size() == requests.size());
  for (size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i].id == requests[i].id);
    CHECK(loaded[i].origin.x == requests[i].origin.x);
    CHECK(loaded[i].destination.y == requests[i].destination.y);
    CHECK(loaded[i].depart_at == requests[i].depart_at);
  }
}

TEST_CASE("malformed CSV rows name the offending row") {
  TempDir dir;
  const std::string path = dir.file("bad.csv");
  write_text_file(path, "id,ox,oy,dx,dy,depart_at\n0,0,0,1,1,0\n1,nope,0,2,2,0\n");
  try {
    load_requests_csv(path);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }

  write_text_file(path, "id,ox,oy\n");
  CHECK_THROWS_AS(load_requests_csv(path), parse_error);
}

TEST_CASE("catalog and shares JSON round-trip") {
  TempDir dir;
  Instance instance;
  instance.requests = generate_demand(DemandConfig{.n_riders = 6, .seed = 17});
  FeasibilityParams feas;
  feas.detour_factor = 2.5;
  const GroupCatalog catalog =
      enumerate_feasible_groups(instance.requests, instance.params, feas);

  const std::string cat_path = dir.file("catalog.json");
  save_catalog(cat_path, catalog);
  const GroupCatalog loaded = load_catalog(cat_path);
  REQUIRE(loaded.size() == catalog.size());
  for (int g = 0; g < catalog.size(); ++g) {
    const auto idx = loaded.find(catalog[g].members);
    REQUIRE(idx.has_value());
    CHECK(loaded[*idx].total_cost == catalog[g].total_cost);
    CHECK(loaded[*idx].operator_cost == catalog[g].operator_cost);
  }

  const CostShareTable table = residual_shares(loaded, ResidualWeighting::proportional);
  const std::string sh_path = dir.file("shares.json");
  save_shares(sh_path, table);
  const CostShareTable reloaded = load_shares(sh_path, loaded);
  CHECK(reloaded.protocol() == table.protocol());
  CHECK(reloaded.budget_mode() == BudgetMode::balanced);
  for (int g = 0; g < loaded.size(); ++g) {
    for (int rider : loaded[g].members) {
      CHECK(reloaded.share(g, rider) == table.share(g, rider));
    }
  }
}

TEST_CASE("ordinal JSON round-trip") {
  TempDir dir;
  const OrdinalInstance instance = rhe_rue_conflict_instance();
  const std::string path = dir.file("ordinal.json");
  write_text_file(path, ordinal_to_json_text(instance));
  const OrdinalInstance loaded = ordinal_from_json_text(read_text_file(path));
  CHECK(loaded.riders == instance.riders);
  CHECK(loaded.feasible == instance.feasible);
  CHECK(loaded.pref == instance.pref);
}

}  // TEST_SUITE
