#pragma once

#include <map>
#include <vector>

namespace ctg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

enum class Metric { euclidean, manhattan };

double distance_km(const Vec2& a, const Vec2& b, Metric metric);

enum class StopKind { origin, destination };

struct Stop {
  int rider = -1;
  StopKind kind = StopKind::origin;
  Vec2 position;
  double arrival_hours = 0.0;
};

// A single vehicle's stop sequence for one group. Each rider's origin
// precedes her destination and arrival times are non-decreasing.
struct Route {
  std::vector<Stop> stops;
  double length_km = 0.0;
  std::map<int, double> wait_hours;  // w(G,i), measured from the rider's own departure
  std::map<int, double> ride_hours;  // t(G,i), boarding to alighting
  double duration_hours = 0.0;       // service start to last stop

  bool empty() const { return stops.empty(); }
};

}  // namespace ctg
