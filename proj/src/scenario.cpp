#include "ctg/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ctg/io.hpp"
#include "ctg/rng.hpp"

namespace ctg {

namespace {

Vec2 sample_annulus(Rng& rng, Vec2 center, double r_min, double r_max) {
  // Area-uniform radius within the annulus.
  const double u = rng.uniform();
  const double r = std::sqrt(r_min * r_min + u * (r_max * r_max - r_min * r_min));
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return Vec2{center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

}  // namespace

std::vector<TripRequest> generate_demand(const DemandConfig& config) {
  if (config.n_riders < 1) throw error("demand needs n_riders >= 1");
  if (config.window_seconds < 0) throw error("demand needs window_seconds >= 0");
  Rng rng(config.seed);
  std::vector<TripRequest> requests;
  requests.reserve(config.n_riders);

  const Vec2 center = config.model == CityModel::box
                          ? Vec2{config.width_km / 2.0, config.height_km / 2.0}
                          : Vec2{0.0, 0.0};
  for (int i = 0; i < config.n_riders; ++i) {
    TripRequest req;
    req.id = i;
    if (config.model == CityModel::box) {
      req.origin = Vec2{rng.uniform(0.0, config.width_km), rng.uniform(0.0, config.height_km)};
      req.destination = config.destination_mode == DestinationMode::common_center
                            ? center
                            : Vec2{rng.uniform(0.0, config.width_km),
                                   rng.uniform(0.0, config.height_km)};
    } else {
      req.origin = sample_annulus(rng, center, config.inner_radius_km, config.outer_radius_km);
      req.destination = config.destination_mode == DestinationMode::common_center
                            ? center
                            : sample_annulus(rng, center, 0.0, config.core_radius_km);
    }
    req.depart_at = rng.uniform(0.0, config.window_seconds);
    // A zero-length trip would be invalid; nudge the destination.
    if (req.origin.x == req.destination.x && req.origin.y == req.destination.y) {
      req.destination.x += 1e-6;
    }
    requests.push_back(req);
  }
  return requests;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open instance file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json_text(buffer.str());
}

void save_instance(const std::string& path, const Instance& instance) {
  std::ofstream out(path);
  if (!out) throw error("cannot write instance file: " + path);
  out << instance_to_json_text(instance) << "\n";
}

std::vector<TripRequest> load_requests_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open CSV file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw parse_error(path + ": empty file");
  if (line.ends_with('\r')) line.pop_back();
  if (line != "id,ox,oy,dx,dy,depart_at") {
    throw parse_error(path + ": expected header 'id,ox,oy,dx,dy,depart_at', got '" + line + "'");
  }

  std::vector<TripRequest> requests;
  int row = 1;
  while (std::getline(in, line)) {
    if (line.ends_with('\r')) line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(fields, cell, ',')) {
      try {
        size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw parse_error(path + ": row " + std::to_string(row) + ": bad number '" + cell + "'");
      }
    }
    if (values.size() != 6) {
      throw parse_error(path + ": row " + std::to_string(row) + ": expected 6 fields, got " +
                        std::to_string(values.size()));
    }
    TripRequest req;
    req.id = static_cast<int>(values[0]);
    req.origin = Vec2{values[1], values[2]};
    req.destination = Vec2{values[3], values[4]};
    req.depart_at = values[5];
    requests.push_back(req);
    ++row;
  }
  validate_requests(requests);
  return requests;
}

void save_requests_csv(const std::string& path, const std::vector<TripRequest>& requests) {
  std::ofstream out(path);
  if (!out) throw error("cannot write CSV file: " + path);
  out << "id,ox,oy,dx,dy,depart_at\n";
  out.precision(17);
  for (const auto& req : requests) {
    out << req.id << ',' << req.origin.x << ',' << req.origin.y << ',' << req.destination.x
        << ',' << req.destination.y << ',' << req.depart_at << '\n';
  }
}

}  // namespace ctg
