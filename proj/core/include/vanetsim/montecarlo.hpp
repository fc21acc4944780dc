// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vanetsim/scheduler.hpp"

namespace vanetsim {

enum class SchedulerMode { SingleFlow, MultiFlow, Both };
enum class DirectionPolicy { Random, AllUplink, AllDownlink };
enum class SweepAxis { GammaDb, GoStraight };

struct ExperimentConfig {
  int users = 4;
  double street_spacing = 30.0;  // m
  double map_extent = 90.0;      // m, multiple of street_spacing
  double disk_radius = 65.0;     // m
  double speed = 10.0;           // m per time slot
  double go_straight_prob = 0.5;
  double gamma_o_db = 10.0;
  std::vector<double> gamma_o_db_sweep = {0.0, 5.0, 10.0, 15.0, 20.0};
  std::vector<double> go_straight_sweep = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                           0.6, 0.7, 0.8, 0.9, 1.0};
  int trials = 1000;
  std::uint64_t master_seed = 1;
  RelayMode relay_mode = RelayMode::AF;
  SchedulerMode scheduler_mode = SchedulerMode::Both;
  double path_loss_exponent = 3.0;
  double reference_distance = 1.0;
  bool rayleigh_fading = true;
  double beta = 1.0;
  int background_vehicles = 0;
  DirectionPolicy direction_policy = DirectionPolicy::Random;
  int perm_cap = kDefaultPermCap;
  bool allow_over_cap = false;
  int workers = 0;  // 0: hardware concurrency

  /// Throws ConfigError naming the offending key, or CapError when the user
  /// count exceeds the permutation-search cap.
  void validate() const;

  GridMap grid() const;
  ChannelModel channel(double gamma_o_linear) const;
};

/// The swept parameters of one trial.
struct TrialPoint {
  double gamma_o_linear = 10.0;
  double go_straight_prob = 0.5;
};

struct TrialResult {
  std::uint64_t seed = 0;
  ScheduleMetrics single_flow;
  ScheduleMetrics multi_flow;
  std::vector<UserMode> user_modes;  // realized modes, single-flow schedule
};

/// Seed for (point, trial): counter = point << 32 | trial folded through a
/// SplitMix64 bijection, so the map is injective per master seed and trials
/// can run in any order.
std::uint64_t seed_schedule(std::uint64_t master_seed,
                            std::uint64_t point_index,
                            std::uint64_t trial_index);

/// One full realization: placement, trajectories, traffic directions,
/// channel draws, single-flow optimization and (unless disabled) multi-flow
/// combination. A pure function of (seed, cfg, point).
TrialResult run_trial(std::uint64_t seed, const ExperimentConfig& cfg,
                      const TrialPoint& point);

/// Same computation with every intermediate kept, for inspection tools and
/// tests.
struct TrialArtifacts {
  TrajectoryTable traj;
  ChannelRealization chan;
  ChannelModel model;
  std::vector<Direction> directions;
  Schedule single_flow;
  Schedule multi_flow;
};

TrialArtifacts run_trial_full(std::uint64_t seed, const ExperimentConfig& cfg,
                              const TrialPoint& point);

/// Context view over trial artifacts (pointers into `art`).
ScheduleContext make_context(const TrialArtifacts& art,
                             const ExperimentConfig& cfg);

struct AggregatePoint {
  std::string param_name;
  double param_value = 0.0;
  std::string scheme;  // "single_flow" or "multi_flow"
  RelayMode relay_mode = RelayMode::AF;
  double mean_sum_rate = 0.0;
  double std_error = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
  double mean_n_total = 0.0;
  int trials = 0;
};

/// Cartesian sweep of one axis x trials, aggregated per point with 95%
/// normal confidence intervals. Output is a pure function of (cfg, axis),
/// independent of worker count and completion order.
std::vector<AggregatePoint> sweep(const ExperimentConfig& cfg, SweepAxis axis);

/// CSV with the fixed header:
/// sweep_param_name,sweep_value,scheme,relay_mode,mean_sum_rate,stderr,
/// ci95_lo,ci95_hi,mean_nt,trials
void write_results_csv(const std::vector<AggregatePoint>& rows,
                       std::ostream& os);

}  // namespace vanetsim
