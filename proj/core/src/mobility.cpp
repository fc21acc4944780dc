// SPDX-License-Identifier: Apache-2.0
#include "vanetsim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "vanetsim/errors.hpp"

namespace vanetsim {

namespace {
constexpr double kTol = 1e-9;

// Checks that the heading is compatible with the street under the vehicle:
// east/west motion needs y on a street line, north/south needs x.
void require_on_travel_street(const VehicleState& s, const GridMap& map) {
  const double c = is_horizontal(s.heading) ? s.position.y : s.position.x;
  if (std::abs(c - map.snap_to_grid(c)) > kTol) {
    throw InvalidStateError("vehicle position is off-street for its heading");
  }
}
}  // namespace

void MobilityParams::validate() const {
  if (!(go_straight_prob >= 0.0 && go_straight_prob <= 1.0)) {
    throw ConfigError("go_straight_prob must lie in [0, 1]");
  }
}

Turn draw_turn(const MobilityParams& params, Rng& rng) {
  const double u = rng.uniform();
  if (u < params.go_straight_prob) return Turn::Straight;
  const double side = 0.5 * (1.0 - params.go_straight_prob);
  if (u < params.go_straight_prob + side) return Turn::Left;
  return Turn::Right;
}

VehicleState advance(const VehicleState& state, const GridMap& map,
                     const MobilityParams& params, Rng& rng,
                     double* path_length, std::vector<Turn>* turns) {
  map.validate();
  params.validate();
  if (state.speed < 0.0) throw InvalidStateError("negative speed");
  require_on_travel_street(state, map);

  VehicleState next = state;
  double remaining = state.speed;
  double traveled = 0.0;

  while (remaining > kTol) {
    const bool horiz = is_horizontal(next.heading);
    double along = horiz ? next.position.x : next.position.y;
    const Vec2 unit = heading_unit(next.heading);
    const int forward = (unit.x + unit.y) > 0.0 ? 1 : -1;
    const double ahead = map.to_next_intersection(along, forward, kTol);

    if (remaining < ahead - kTol) {
      along += forward * remaining;
      traveled += remaining;
      remaining = 0.0;
    } else {
      // Reached an intersection (possibly exactly at the end of the move):
      // one independent turn decision fires.
      along = map.snap_to_grid(along + forward * ahead);
      traveled += ahead;
      remaining -= ahead;
      if (remaining < 0.0) remaining = 0.0;
      const Turn t = draw_turn(params, rng);
      if (turns != nullptr) turns->push_back(t);
      switch (t) {
        case Turn::Straight: break;
        case Turn::Left: next.heading = turn_left(next.heading); break;
        case Turn::Right: next.heading = turn_right(next.heading); break;
      }
    }

    if (horiz) {
      next.position.x = map.wrap(along);
    } else {
      next.position.y = map.wrap(along);
    }
  }

  if (path_length != nullptr) *path_length += traveled;
  return next;
}

TrajectoryTable::TrajectoryTable(std::vector<int> node_ids, int horizon)
    : ids_(std::move(node_ids)), horizon_(horizon) {
  pos_.resize(ids_.size() * static_cast<std::size_t>(horizon_));
}

int TrajectoryTable::index_of(int node_id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] == node_id) return static_cast<int>(i);
  }
  throw std::out_of_range("unknown node_id in trajectory table");
}

const Vec2& TrajectoryTable::at(int node_id, int slot) const {
  if (slot < 1 || slot > horizon_) {
    throw std::out_of_range("trajectory slot out of range");
  }
  return pos_[static_cast<std::size_t>(index_of(node_id)) * horizon_ +
              (slot - 1)];
}

void TrajectoryTable::set(int node_id, int slot, const Vec2& p) {
  if (slot < 1 || slot > horizon_) {
    throw std::out_of_range("trajectory slot out of range");
  }
  pos_[static_cast<std::size_t>(index_of(node_id)) * horizon_ + (slot - 1)] = p;
}

void TrajectoryTable::to_csv(std::ostream& os) const {
  os << "node_id,slot,x,y\n";
  char buf[128];
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    for (int t = 1; t <= horizon_; ++t) {
      const Vec2& p = pos_[i * horizon_ + (t - 1)];
      std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g\n", ids_[i], t, p.x,
                    p.y);
      os << buf;
    }
  }
}

TrajectoryTable predict_trajectories(const std::vector<VehicleState>& states,
                                     const GridMap& map,
                                     const MobilityParams& params, int horizon,
                                     Rng& rng) {
  std::vector<int> ids;
  ids.reserve(states.size());
  for (const auto& s : states) ids.push_back(s.node_id);

  TrajectoryTable table(std::move(ids), horizon);
  std::vector<VehicleState> current = states;
  for (int t = 1; t <= horizon; ++t) {
    for (auto& s : current) {
      s = advance(s, map, params, rng);
      table.set(s.node_id, t, s.position);
    }
  }
  return table;
}

std::vector<VehicleState> place_uniform(const GridMap& map, int count,
                                        double speed, Rng& rng,
                                        int first_node_id) {
  map.validate();
  const int half_lines = static_cast<int>(std::round(map.extent /
                                                     map.street_spacing));
  // Lines y = k*spacing and x = k*spacing for k in [-K, K-1]; +extent and
  // -extent are the same torus line.
  const int lines_per_axis = 2 * half_lines;

  std::vector<VehicleState> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int line = rng.uniform_int(2 * lines_per_axis);
    const bool horizontal = line < lines_per_axis;
    const double offset =
        (line % lines_per_axis - half_lines) * map.street_spacing;
    const double coord = rng.uniform(-map.extent, map.extent);
    VehicleState s;
    s.node_id = first_node_id + i;
    s.speed = speed;
    if (horizontal) {
      s.position = {coord, offset};
      s.heading = rng.uniform_int(2) == 0 ? Heading::East : Heading::West;
    } else {
      s.position = {offset, coord};
      s.heading = rng.uniform_int(2) == 0 ? Heading::North : Heading::South;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace vanetsim
