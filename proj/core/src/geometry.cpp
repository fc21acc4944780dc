// SPDX-License-Identifier: Apache-2.0
#include "vanetsim/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "vanetsim/errors.hpp"

namespace vanetsim {

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Heading turn_left(Heading h) {
  return static_cast<Heading>(static_cast<int>(h) % 4 + 1);
}

Heading turn_right(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 2) % 4 + 1);
}

Vec2 heading_unit(Heading h) {
  switch (h) {
    case Heading::East: return {1.0, 0.0};
    case Heading::North: return {0.0, 1.0};
    case Heading::West: return {-1.0, 0.0};
    case Heading::South: return {0.0, -1.0};
  }
  return {0.0, 0.0};
}

bool is_horizontal(Heading h) {
  return h == Heading::East || h == Heading::West;
}

void GridMap::validate() const {
  if (!(street_spacing > 0.0)) {
    throw ConfigError("street_spacing must be positive");
  }
  if (!(extent > 0.0)) {
    throw ConfigError("map_extent must be positive");
  }
  const double blocks = extent / street_spacing;
  if (std::abs(blocks - std::round(blocks)) > 1e-9) {
    throw ConfigError("map_extent must be a multiple of street_spacing");
  }
}

double GridMap::wrap(double coord) const {
  const double period = 2.0 * extent;
  while (coord >= extent) coord -= period;
  while (coord < -extent) coord += period;
  return coord;
}

double GridMap::snap_to_grid(double coord) const {
  return std::round(coord / street_spacing) * street_spacing;
}

bool GridMap::on_street(const Vec2& p, double tol) const {
  return std::abs(p.x - snap_to_grid(p.x)) <= tol ||
         std::abs(p.y - snap_to_grid(p.y)) <= tol;
}

double GridMap::to_next_intersection(double along, int forward,
                                     double tol) const {
  // Fold both travel directions onto a forward axis; the grid is symmetric.
  const double s = forward >= 0 ? along : -along;
  double u = std::fmod(s, street_spacing);
  if (u < 0.0) u += street_spacing;
  if (u >= street_spacing) u -= street_spacing;
  if (u <= tol || street_spacing - u <= tol) {
    // Already at an intersection (its decision fired on arrival).
    return street_spacing;
  }
  return street_spacing - u;
}

}  // namespace vanetsim
