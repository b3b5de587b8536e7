#include "ctg/route.hpp"

#include <cmath>

namespace ctg {

double distance_km(const Vec2& a, const Vec2& b, Metric metric) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  switch (metric) {
    case Metric::euclidean:
      return std::sqrt(dx * dx + dy * dy);
    case Metric::manhattan:
      return std::fabs(dx) + std::fabs(dy);
  }
  return 0.0;
}

}  // namespace ctg
