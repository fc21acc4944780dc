// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include "vanetsim/geometry.hpp"
#include "vanetsim/rng.hpp"

namespace vanetsim {

struct MobilityParams {
  /// Probability of going straight at an intersection; left and right turns
  /// each take (1 - go_straight_prob) / 2.
  double go_straight_prob = 0.5;

  void validate() const;
};

enum class Turn { Straight, Left, Right };

/// One intersection decision.
Turn draw_turn(const MobilityParams& params, Rng& rng);

struct VehicleState {
  int node_id = 0;
  Vec2 position;
  Heading heading = Heading::East;
  double speed = 0.0;  // meters per time slot
};

/// Moves a vehicle by `speed` meters along the streets in one time slot.
/// Every intersection reached during the move, including an arrival exactly
/// at the end of the move, draws one independent turn decision; leftover
/// distance continues in the new heading. Coordinates wrap at the map
/// boundary.
///
/// `path_length`, if given, accumulates the traveled distance (equals speed).
/// `turns`, if given, receives one entry per intersection decision.
VehicleState advance(const VehicleState& state, const GridMap& map,
                     const MobilityParams& params, Rng& rng,
                     double* path_length = nullptr,
                     std::vector<Turn>* turns = nullptr);

/// Per-node positions for slots 1..horizon. Slot t holds the position after
/// t applications of advance to the initial state.
class TrajectoryTable {
 public:
  TrajectoryTable() = default;
  TrajectoryTable(std::vector<int> node_ids, int horizon);

  int horizon() const { return horizon_; }
  const std::vector<int>& node_ids() const { return ids_; }
  const Vec2& at(int node_id, int slot) const;  // slot in [1, horizon]
  void set(int node_id, int slot, const Vec2& p);

  /// CSV: node_id,slot,x,y
  void to_csv(std::ostream& os) const;

 private:
  int index_of(int node_id) const;

  std::vector<int> ids_;
  int horizon_ = 0;
  std::vector<Vec2> pos_;  // [node][slot-1]
};

/// Predicted positions over `horizon` slots; deterministic given the rng
/// state, and identical to repeatedly applying advance. Predicted and
/// realized positions are the same thing in this simulator (perfect position
/// reporting).
TrajectoryTable predict_trajectories(const std::vector<VehicleState>& states,
                                     const GridMap& map,
                                     const MobilityParams& params, int horizon,
                                     Rng& rng);

/// Uniform placement over the street segments of the map; headings uniform
/// over the directions compatible with the sampled street.
std::vector<VehicleState> place_uniform(const GridMap& map, int count,
                                        double speed, Rng& rng,
                                        int first_node_id = 1);

}  // namespace vanetsim
