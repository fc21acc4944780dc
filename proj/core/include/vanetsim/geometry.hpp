// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace vanetsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Euclidean distance. Symmetric, nonnegative, zero iff equal.
double distance(const Vec2& a, const Vec2& b);

/// Travel direction along a street, numbered counterclockwise from East.
enum class Heading : int { East = 1, North = 2, West = 3, South = 4 };

Heading turn_left(Heading h);
Heading turn_right(Heading h);
Vec2 heading_unit(Heading h);
/// True for East/West (motion along a horizontal street).
bool is_horizontal(Heading h);

/// Regular street grid: streets are the lines x = k*street_spacing and
/// y = k*street_spacing inside the square [-extent, extent]^2. The map is a
/// torus; coordinates wrap at +/-extent, which is itself a street line, so
/// node density stays constant over long runs.
struct GridMap {
  double street_spacing = 30.0;
  double extent = 90.0;  // half-width; must be a positive multiple of spacing

  void validate() const;
  /// Wraps a coordinate into [-extent, extent).
  double wrap(double coord) const;
  bool on_street(const Vec2& p, double tol = 1e-9) const;
  /// Nearest grid multiple of street_spacing.
  double snap_to_grid(double coord) const;
  /// Distance from the along-street coordinate `along`, moving in direction
  /// `forward` (+1/-1), to the next intersection strictly ahead. In
  /// (0, street_spacing]; a position already at an intersection reports a
  /// full block (that intersection's decision was made on arrival).
  double to_next_intersection(double along, int forward, double tol = 1e-9) const;
};

}  // namespace vanetsim
