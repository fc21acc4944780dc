// SPDX-License-Identifier: Apache-2.0
#include "vanetsim/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace vanetsim {

void ExperimentConfig::validate() const {
  if (users < 1) throw ConfigError("users must be >= 1");
  if (perm_cap < 1) throw ConfigError("perm_cap must be >= 1");
  if (users > perm_cap && !allow_over_cap) {
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "users=%d exceeds perm_cap=%d and the slot permutation "
                  "search is factorial ((2n)! orderings); set allow_over_cap "
                  "to force",
                  users, perm_cap);
    throw CapError(buf);
  }
  grid().validate();  // street_spacing, map_extent
  if (!(disk_radius > 0.0)) throw ConfigError("disk_radius must be positive");
  if (!(speed >= 0.0)) throw ConfigError("speed must be >= 0");
  if (!(go_straight_prob >= 0.0 && go_straight_prob <= 1.0)) {
    throw ConfigError("go_straight_prob must lie in [0, 1]");
  }
  if (!(gamma_o_db == gamma_o_db)) throw ConfigError("gamma_o_db is NaN");
  if (gamma_o_db_sweep.empty()) {
    throw ConfigError("gamma_o_db_sweep must be non-empty");
  }
  if (go_straight_sweep.empty()) {
    throw ConfigError("go_straight_sweep must be non-empty");
  }
  for (double p : go_straight_sweep) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("go_straight_sweep values must lie in [0, 1]");
    }
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!(path_loss_exponent > 0.0)) {
    throw ConfigError("path_loss_exponent must be positive");
  }
  if (!(reference_distance > 0.0)) {
    throw ConfigError("reference_distance must be positive");
  }
  if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
  if (background_vehicles < 0) {
    throw ConfigError("background_vehicles must be >= 0");
  }
  if (workers < 0) throw ConfigError("workers must be >= 0");
}

GridMap ExperimentConfig::grid() const {
  return GridMap{street_spacing, map_extent};
}

ChannelModel ExperimentConfig::channel(double gamma_o_linear) const {
  ChannelModel model;
  model.path_loss_exponent = path_loss_exponent;
  model.reference_distance = reference_distance;
  model.rayleigh_fading = rayleigh_fading;
  model.disk_radius = disk_radius;
  model.noise_power = 1.0;
  model.received_power = gamma_o_linear;
  return model;
}

std::uint64_t seed_schedule(std::uint64_t master_seed,
                            std::uint64_t point_index,
                            std::uint64_t trial_index) {
  const std::uint64_t counter = (point_index << 32) | (trial_index & 0xFFFFFFFFull);
  return splitmix64(splitmix64(master_seed) ^ counter);
}

TrialArtifacts run_trial_full(std::uint64_t seed, const ExperimentConfig& cfg,
                              const TrialPoint& point) {
  Rng rng(seed);
  const GridMap map = cfg.grid();
  const MobilityParams mobility{point.go_straight_prob};
  const int horizon = 2 * cfg.users;

  // Draw order is fixed: placement, trajectories, directions, channel.
  const auto states = place_uniform(
      map, cfg.users + cfg.background_vehicles, cfg.speed, rng);

  TrialArtifacts art;
  art.traj = predict_trajectories(states, map, mobility, horizon, rng);

  art.directions.assign(cfg.users, Direction::Uplink);
  for (int u = 0; u < cfg.users; ++u) {
    switch (cfg.direction_policy) {
      case DirectionPolicy::Random:
        art.directions[u] =
            rng.uniform_int(2) == 0 ? Direction::Uplink : Direction::Downlink;
        break;
      case DirectionPolicy::AllUplink:
        art.directions[u] = Direction::Uplink;
        break;
      case DirectionPolicy::AllDownlink:
        art.directions[u] = Direction::Downlink;
        break;
    }
  }

  art.model = cfg.channel(point.gamma_o_linear);
  art.chan = draw_realization(art.traj, Vec2{0.0, 0.0}, art.model, rng);

  const ScheduleContext ctx = make_context(art, cfg);
  art.single_flow = optimize_single_flow(ctx, cfg.perm_cap, cfg.allow_over_cap);
  art.multi_flow = cfg.scheduler_mode == SchedulerMode::SingleFlow
                       ? art.single_flow
                       : combine_multi_flow(art.single_flow, ctx);
  return art;
}

ScheduleContext make_context(const TrialArtifacts& art,
                             const ExperimentConfig& cfg) {
  ScheduleContext ctx;
  ctx.traj = &art.traj;
  ctx.chan = &art.chan;
  ctx.model = &art.model;
  ctx.relay_mode = cfg.relay_mode;
  ctx.directions = art.directions;
  ctx.num_users = cfg.users;
  ctx.beta = cfg.beta;
  return ctx;
}

TrialResult run_trial(std::uint64_t seed, const ExperimentConfig& cfg,
                      const TrialPoint& point) {
  const TrialArtifacts art = run_trial_full(seed, cfg, point);
  TrialResult result;
  result.seed = seed;
  result.single_flow = art.single_flow.metrics;
  result.multi_flow = art.multi_flow.metrics;
  result.user_modes.reserve(art.single_flow.users.size());
  for (const auto& u : art.single_flow.users) {
    result.user_modes.push_back(u.mode);
  }
  return result;
}

namespace {

struct Stats {
  double mean = 0.0;
  double std_error = 0.0;
};

Stats aggregate(const std::vector<double>& xs) {
  Stats st;
  const std::size_t n = xs.size();
  if (n == 0) return st;
  double sum = 0.0;
  for (double x : xs) sum += x;
  st.mean = sum / static_cast<double>(n);
  if (n >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - st.mean) * (x - st.mean);
    st.std_error = std::sqrt(ss / static_cast<double>(n - 1)) /
                   std::sqrt(static_cast<double>(n));
  }
  return st;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

std::vector<AggregatePoint> sweep(const ExperimentConfig& cfg,
                                  SweepAxis axis) {
  cfg.validate();
  const bool gamma_axis = axis == SweepAxis::GammaDb;
  const std::vector<double>& values =
      gamma_axis ? cfg.gamma_o_db_sweep : cfg.go_straight_sweep;
  const char* param_name = gamma_axis ? "gamma_o_db" : "go_straight_prob";

  std::vector<TrialPoint> points;
  points.reserve(values.size());
  for (double v : values) {
    TrialPoint p;
    p.gamma_o_linear = db_to_linear(gamma_axis ? v : cfg.gamma_o_db);
    p.go_straight_prob = gamma_axis ? cfg.go_straight_prob : v;
    points.push_back(p);
  }

  const std::size_t total = points.size() * static_cast<std::size_t>(cfg.trials);
  std::vector<TrialResult> results(total);

  // Trials are independent, keyed by (point, trial); any execution order
  // fills the same cells.
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      const std::size_t pi = i / cfg.trials;
      const std::size_t ti = i % cfg.trials;
      try {
        const std::uint64_t seed = seed_schedule(cfg.master_seed, pi, ti);
        results[i] = run_trial(seed, cfg, points[pi]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int workers = resolve_workers(cfg.workers);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<AggregatePoint> rows;
  const bool emit_single = cfg.scheduler_mode != SchedulerMode::MultiFlow;
  const bool emit_multi = cfg.scheduler_mode != SchedulerMode::SingleFlow;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    std::vector<double> rate_single, rate_multi, nt_single, nt_multi;
    rate_single.reserve(cfg.trials);
    for (int ti = 0; ti < cfg.trials; ++ti) {
      const TrialResult& r = results[pi * cfg.trials + ti];
      rate_single.push_back(r.single_flow.sum_rate);
      rate_multi.push_back(r.multi_flow.sum_rate);
      nt_single.push_back(r.single_flow.n_total);
      nt_multi.push_back(r.multi_flow.n_total);
    }
    auto make_row = [&](const char* scheme, const std::vector<double>& rates,
                        const std::vector<double>& nts) {
      const Stats st = aggregate(rates);
      AggregatePoint row;
      row.param_name = param_name;
      row.param_value = values[pi];
      row.scheme = scheme;
      row.relay_mode = cfg.relay_mode;
      row.mean_sum_rate = st.mean;
      row.std_error = st.std_error;
      row.ci95_lo = st.mean - 1.96 * st.std_error;
      row.ci95_hi = st.mean + 1.96 * st.std_error;
      row.mean_n_total = aggregate(nts).mean;
      row.trials = cfg.trials;
      return row;
    };
    if (emit_single) rows.push_back(make_row("single_flow", rate_single, nt_single));
    if (emit_multi) rows.push_back(make_row("multi_flow", rate_multi, nt_multi));
  }
  return rows;
}

void write_results_csv(const std::vector<AggregatePoint>& rows,
                       std::ostream& os) {
  os << "sweep_param_name,sweep_value,scheme,relay_mode,mean_sum_rate,stderr,"
        "ci95_lo,ci95_hi,mean_nt,trials\n";
  char buf[320];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%s,%.12g,%s,%s,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n",
                  r.param_name.c_str(), r.param_value, r.scheme.c_str(),
                  to_string(r.relay_mode), r.mean_sum_rate, r.std_error,
                  r.ci95_lo, r.ci95_hi, r.mean_n_total, r.trials);
    os << buf;
  }
}

}  // namespace vanetsim
