#include "idla/core.hpp"

#include <algorithm>
#include <cmath>

namespace idla::core {

std::int32_t radius_hint(int dim, std::int64_t particles, double extra_radius) {
  std::int64_t r = geom::rho(dim, static_cast<double>(std::max<std::int64_t>(particles, 1)));
  double h = 1.5 * static_cast<double>(r) + 16.0;
  if (extra_radius + 4.0 > h) h = extra_radius + 4.0;
  return static_cast<std::int32_t>(std::min(h, 1.0e9));
}

}  // namespace idla::core
