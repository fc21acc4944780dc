// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "vanetsim/errors.hpp"
#include "vanetsim/geometry.hpp"
#include "vanetsim/mobility.hpp"
#include "vanetsim/rng.hpp"

namespace vanetsim {

struct ChannelModel {
  double path_loss_exponent = 3.0;
  double reference_distance = 1.0;  // meters
  bool rayleigh_fading = true;
  double disk_radius = 65.0;  // meters; hard connectivity cutoff
  double noise_power = 1.0;   // sigma^2, normalized
  double received_power = 1.0;  // P, target level at the aimed receiver

  double gamma_o() const { return received_power / noise_power; }
  void validate() const;
};

struct LinkGain {
  std::complex<double> h;
  double power() const { return std::norm(h); }
};

/// Closed-disk connectivity: true iff distance <= radius.
bool is_connected(const Vec2& a, const Vec2& b, double radius);

/// Distance-based path loss with optional unit-mean Rayleigh (exponential
/// power) fading and uniform phase. |h|^2 = (d/ref)^-eta * F. A distance of
/// exactly zero is clamped to the reference distance. The disk cutoff is not
/// applied here; draw_realization handles it.
LinkGain draw_gain(const Vec2& a, const Vec2& b, const ChannelModel& model,
                   Rng& rng);

/// Transmit power that delivers `target_received_power` through a link of
/// the given power gain. Throws LinkInfeasibleError on a dead link.
double controlled_tx_power(double channel_power_gain,
                           double target_received_power);

/// Per-slot complex channel coefficients between all node pairs. Node 0 is
/// the static node; vehicles are 1..num_nodes-1. Reciprocal within a slot,
/// independent across slots (block fading). Links beyond the disk radius
/// have coefficient exactly zero.
class ChannelRealization {
 public:
  ChannelRealization() = default;
  ChannelRealization(int num_nodes, int horizon);

  int num_nodes() const { return n_; }
  int horizon() const { return horizon_; }

  std::complex<double> gain(int a, int b, int slot) const;
  double power_gain(int a, int b, int slot) const;
  /// Sets both (a,b) and (b,a); test and fixture hook.
  void set_gain(int a, int b, int slot, std::complex<double> h);

  /// CSV: slot,node_a,node_b,re_h,im_h (pairs a < b only).
  void to_csv(std::ostream& os) const;

 private:
  int n_ = 0;
  int horizon_ = 0;
  std::vector<std::complex<double>> h_;  // [slot-1][a][b]
};

/// Draws gains for all pairs among {SN} + trajectory nodes at every slot.
/// Draw order is slot-major, pair-lexicographic; dead (beyond-R) pairs
/// consume no randomness.
ChannelRealization draw_realization(const TrajectoryTable& traj,
                                    const Vec2& sn_position,
                                    const ChannelModel& model, Rng& rng);

double db_to_linear(double db);
double linear_to_db(double value);

}  // namespace vanetsim
