#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctg/core.hpp"

namespace ctg {

enum class CityModel { box, ring_radial };
enum class DestinationMode { uniform, common_center };

struct DemandConfig {
  int n_riders = 50;
  double window_seconds = 600.0;
  std::uint64_t seed = 42;
  CityModel model = CityModel::box;
  DestinationMode destination_mode = DestinationMode::uniform;
  // Box model: coordinates sampled uniformly inside [0, width] x [0, height].
  double width_km = 10.0;
  double height_km = 10.0;
  // Ring-radial model: origins on an outer annulus, destinations biased
  // towards the core.
  double outer_radius_km = 8.0;
  double inner_radius_km = 3.0;
  double core_radius_km = 1.5;
};

// Deterministic for a fixed seed on every platform (see Rng).
std::vector<TripRequest> generate_demand(const DemandConfig& config);

struct Instance {
  CostParams params;
  std::vector<TripRequest> requests;
};

Instance load_instance(const std::string& path);
void save_instance(const std::string& path, const Instance& instance);

// CSV schema: id,ox,oy,dx,dy,depart_at
std::vector<TripRequest> load_requests_csv(const std::string& path);
void save_requests_csv(const std::string& path, const std::vector<TripRequest>& requests);

}  // namespace ctg
