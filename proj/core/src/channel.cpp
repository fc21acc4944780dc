// SPDX-License-Identifier: Apache-2.0
#include "vanetsim/channel.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace vanetsim {

void ChannelModel::validate() const {
  if (!(path_loss_exponent > 0.0)) {
    throw ConfigError("path_loss_exponent must be positive");
  }
  if (!(reference_distance > 0.0)) {
    throw ConfigError("reference_distance must be positive");
  }
  if (!(disk_radius > 0.0)) throw ConfigError("disk_radius must be positive");
  if (!(noise_power > 0.0)) throw ConfigError("noise_power must be positive");
  if (!(received_power > 0.0)) {
    throw ConfigError("received_power must be positive");
  }
}

bool is_connected(const Vec2& a, const Vec2& b, double radius) {
  return distance(a, b) <= radius;
}

LinkGain draw_gain(const Vec2& a, const Vec2& b, const ChannelModel& model,
                   Rng& rng) {
  double d = distance(a, b);
  if (d == 0.0) d = model.reference_distance;  // co-located nodes
  const double path_loss =
      std::pow(d / model.reference_distance, -model.path_loss_exponent);
  const double fade = model.rayleigh_fading ? rng.exponential() : 1.0;
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double amplitude = std::sqrt(path_loss * fade);
  return LinkGain{std::polar(amplitude, phase)};
}

double controlled_tx_power(double channel_power_gain,
                           double target_received_power) {
  if (!(channel_power_gain > 0.0)) {
    throw LinkInfeasibleError("cannot power-control a dead link");
  }
  return target_received_power / channel_power_gain;
}

ChannelRealization::ChannelRealization(int num_nodes, int horizon)
    : n_(num_nodes), horizon_(horizon) {
  h_.assign(static_cast<std::size_t>(n_) * n_ * horizon_, {0.0, 0.0});
}

std::complex<double> ChannelRealization::gain(int a, int b, int slot) const {
  if (a < 0 || a >= n_ || b < 0 || b >= n_ || slot < 1 || slot > horizon_) {
    throw std::out_of_range("channel lookup out of range");
  }
  return h_[(static_cast<std::size_t>(slot - 1) * n_ + a) * n_ + b];
}

double ChannelRealization::power_gain(int a, int b, int slot) const {
  return std::norm(gain(a, b, slot));
}

void ChannelRealization::set_gain(int a, int b, int slot,
                                  std::complex<double> h) {
  if (a < 0 || a >= n_ || b < 0 || b >= n_ || slot < 1 || slot > horizon_) {
    throw std::out_of_range("channel lookup out of range");
  }
  h_[(static_cast<std::size_t>(slot - 1) * n_ + a) * n_ + b] = h;
  h_[(static_cast<std::size_t>(slot - 1) * n_ + b) * n_ + a] = h;
}

void ChannelRealization::to_csv(std::ostream& os) const {
  os << "slot,node_a,node_b,re_h,im_h\n";
  char buf[160];
  for (int t = 1; t <= horizon_; ++t) {
    for (int a = 0; a < n_; ++a) {
      for (int b = a + 1; b < n_; ++b) {
        const auto h = gain(a, b, t);
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.12g,%.12g\n", t, a, b,
                      h.real(), h.imag());
        os << buf;
      }
    }
  }
}

ChannelRealization draw_realization(const TrajectoryTable& traj,
                                    const Vec2& sn_position,
                                    const ChannelModel& model, Rng& rng) {
  model.validate();
  const auto& ids = traj.node_ids();
  const int n = static_cast<int>(ids.size()) + 1;
  ChannelRealization chan(n, traj.horizon());

  auto position = [&](int node, int slot) -> Vec2 {
    return node == 0 ? sn_position : traj.at(node, slot);
  };

  for (int t = 1; t <= traj.horizon(); ++t) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        const Vec2 pa = position(a, t);
        const Vec2 pb = position(b, t);
        if (!is_connected(pa, pb, model.disk_radius)) continue;  // stays zero
        chan.set_gain(a, b, t, draw_gain(pa, pb, model, rng).h);
      }
    }
  }
  return chan;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double value) { return 10.0 * std::log10(value); }

}  // namespace vanetsim
