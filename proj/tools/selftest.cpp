// SPDX-License-Identifier: Apache-2.0
#include "selftest.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <vector>

#include "vanetsim/montecarlo.hpp"

namespace vanetsim {

namespace {

bool close(double a, double b, double rel) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= rel * scale;
}

SchemeInput random_input(Rng& rng, double gamma_o) {
  auto c = [&] {
    return std::polar(std::exp(rng.uniform(-2.0, 2.0)),
                      rng.uniform(0.0, 6.283185307179586));
  };
  SchemeInput in;
  in.gamma_o = gamma_o;
  in.beta = rng.uniform();
  in.sn_relay_1 = c();
  in.user_relay_1 = c();
  in.sn_direct_1 = c();
  in.user_direct_1 = c();
  in.relay_direct_1 = c();
  in.relay_user_2 = c();
  in.relay_sn_2 = c();
  in.sn_direct_2 = c();
  in.relay_direct_2 = c();
  in.user_direct_2 = c();
  return in;
}

using SchemeFn = SchemeOutcome (*)(const SchemeInput&, SnrBreakdown*);
const std::vector<std::pair<const char*, SchemeFn>> kSchemes = {
    {"dl_ul_af", &cdr_dl_ul_af}, {"dl_ul_df", &cdr_dl_ul_df},
    {"ul_dl_af", &cdr_ul_dl_af}, {"ul_dl_df", &cdr_ul_dl_df},
    {"dl_dl_af", &cdr_dl_dl_af}, {"dl_dl_df", &cdr_dl_dl_df},
    {"ul_ul_af", &cdr_ul_ul_af}, {"ul_ul_df", &cdr_ul_ul_df},
};

bool check_capacity_anchors() {
  return capacity(0.0) == 0.0 && close(capacity(1.0), 1.0, 1e-15) &&
         close(capacity(3.0), 2.0, 1e-15);
}

bool check_af_inferiority() {
  for (double g = 0.125; g < 4096.0; g *= 2.0) {
    if (!(af_relay_e2e_snr(g) < g)) return false;
  }
  return af_relay_e2e_snr(0.0) == 0.0;
}

bool check_permutation_counts() {
  const int expected[] = {1, 6, 90};
  for (int n = 1; n <= 3; ++n) {
    int count = 0;
    for_each_valid_permutation(n, [&](const Permutation&) { ++count; });
    if (count != expected[n - 1]) return false;
  }
  return true;
}

bool check_turn_frequencies() {
  GridMap map{30.0, 90.0};
  MobilityParams mob{0.5};
  Rng rng(2024);
  VehicleState s{1, {0.0, 0.0}, Heading::East, 30.0};
  const int kCrossings = 100000;
  int straight = 0, left = 0, right = 0;
  std::vector<Turn> turns;
  for (int i = 0; i < kCrossings; ++i) {
    turns.clear();
    s = advance(s, map, mob, rng, nullptr, &turns);
    for (Turn t : turns) {
      if (t == Turn::Straight) ++straight;
      else if (t == Turn::Left) ++left;
      else ++right;
    }
  }
  const int n = straight + left + right;
  if (n < kCrossings) return false;
  auto within = [&](int k, double p) {
    const double se = std::sqrt(p * (1.0 - p) / n);
    return std::abs(static_cast<double>(k) / n - p) <= 3.0 * se;
  };
  return within(straight, 0.5) && within(left, 0.25) && within(right, 0.25);
}

bool check_street_adherence() {
  GridMap map{30.0, 90.0};
  MobilityParams mob{0.3};
  Rng rng(7);
  auto states = place_uniform(map, 4, 10.0, rng);
  for (int step = 0; step < 500; ++step) {
    for (auto& s : states) {
      double len = 0.0;
      s = advance(s, map, mob, rng, &len);
      if (std::abs(len - s.speed) > 1e-9) return false;
      if (!map.on_street(s.position, 1e-9)) return false;
    }
  }
  return true;
}

bool check_channel_reciprocity() {
  GridMap map{30.0, 90.0};
  Rng rng(11);
  auto states = place_uniform(map, 5, 10.0, rng);
  MobilityParams mob{0.5};
  auto traj = predict_trajectories(states, map, mob, 8, rng);
  ChannelModel model;
  model.received_power = 10.0;
  auto chan = draw_realization(traj, {0.0, 0.0}, model, rng);
  for (int t = 1; t <= 8; ++t) {
    for (int a = 0; a < chan.num_nodes(); ++a) {
      for (int b = a + 1; b < chan.num_nodes(); ++b) {
        if (chan.gain(a, b, t) != chan.gain(b, a, t)) return false;
        const Vec2 pa = a == 0 ? Vec2{0, 0} : traj.at(a, t);
        const Vec2 pb = b == 0 ? Vec2{0, 0} : traj.at(b, t);
        const bool conn = is_connected(pa, pb, model.disk_radius);
        if (!conn && chan.power_gain(a, b, t) != 0.0) return false;
      }
    }
  }
  return true;
}

bool check_power_control() {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double g = std::exp(rng.uniform(-8.0, 4.0));
    const double p = std::exp(rng.uniform(-2.0, 4.0));
    if (controlled_tx_power(g, p) * g != p) return false;
  }
  return true;
}

bool check_decoupling() {
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const double gamma = std::exp(rng.uniform(-2.0, 5.0));
    SchemeInput in = random_input(rng, gamma);
    in.beta = 0.0;
    in.sn_direct_1 = std::abs(in.sn_direct_1);
    // zero every cross-interference path
    in.user_direct_1 = 0.0;
    in.user_direct_2 = 0.0;
    in.relay_direct_1 = 0.0;
    in.relay_direct_2 = 0.0;
    in.relay_sn_2 = std::abs(in.relay_sn_2);
    SchemeInput dlul = in;
    dlul.relay_sn_2 = 0.0;  // relay->SN leak is a cross term for DlUl/DlDl
    SchemeInput uldl = in;
    uldl.sn_relay_1 = 0.0;  // SN->relay leak is the cross term for UlDl
    for (const auto& [name, fn] : kSchemes) {
      const bool af = std::string_view(name).ends_with("af");
      const bool dl_relayed = std::string_view(name).starts_with("dl");
      const SchemeInput& use = dl_relayed ? dlul : uldl;
      const SchemeOutcome got = fn(use, nullptr);
      const SchemeOutcome want =
          noncdr_rates(af ? RelayMode::AF : RelayMode::DF, gamma);
      if (!close(got.snr_1, want.snr_1, 1e-12)) return false;
      if (!close(got.snr_2, want.snr_2, 1e-12)) return false;
      if (got.slots_used != 2 || want.slots_used != 3) return false;
    }
  }
  return true;
}

bool check_mmse_oracle() {
  Rng rng(23);
  for (int i = 0; i < 2000; ++i) {
    EffectiveMimoChannel H;
    for (auto& row : H.h) {
      for (auto& e : row) {
        e = std::polar(std::exp(rng.uniform(-2.0, 2.0)),
                       rng.uniform(0.0, 6.283185307179586));
      }
    }
    H.xi = 1.0 + rng.uniform() * 3.0;
    const double noise = std::exp(rng.uniform(-1.0, 1.0));
    for (int target = 1; target <= 2; ++target) {
      // Oracle: SINR_k = 1/[(I + G^H N^-1 G)^-1]_kk - 1 on the 2x2 complex
      // system, with the other column zeroed for the cancellation case.
      for (bool cancel : {false, true}) {
        auto G = H.h;
        if (cancel) {
          G[0][2 - target] = 0.0;
          G[1][2 - target] = 0.0;
        }
        const double n1 = noise, n2 = H.xi * noise;
        std::complex<double> m11 = 1.0 + std::conj(G[0][0]) * G[0][0] / n1 +
                                   std::conj(G[1][0]) * G[1][0] / n2;
        std::complex<double> m12 = std::conj(G[0][0]) * G[0][1] / n1 +
                                   std::conj(G[1][0]) * G[1][1] / n2;
        std::complex<double> m21 = std::conj(G[0][1]) * G[0][0] / n1 +
                                   std::conj(G[1][1]) * G[1][0] / n2;
        std::complex<double> m22 = 1.0 + std::conj(G[0][1]) * G[0][1] / n1 +
                                   std::conj(G[1][1]) * G[1][1] / n2;
        const std::complex<double> det = m11 * m22 - m12 * m21;
        const std::complex<double> inv_kk =
            (target == 1 ? m22 : m11) / det;
        const double want = 1.0 / inv_kk.real() - 1.0;
        const double got = mmse_sinr_two_obs(H, noise, target, cancel);
        if (!close(got, want, 1e-9)) return false;
      }
    }
  }
  return true;
}

bool check_rescale_invariance() {
  Rng rng(29);
  for (int i = 0; i < 30; ++i) {
    const SchemeInput in = random_input(rng, std::exp(rng.uniform(0.0, 4.0)));
    SchemeInput scaled = in;
    const double c = 4.0;  // power of two: exact in floating point
    for (auto* f : {&scaled.sn_relay_1, &scaled.user_relay_1,
                    &scaled.sn_direct_1, &scaled.user_direct_1,
                    &scaled.relay_direct_1, &scaled.relay_user_2,
                    &scaled.relay_sn_2, &scaled.sn_direct_2,
                    &scaled.relay_direct_2, &scaled.user_direct_2}) {
      *f *= c;
    }
    for (const auto& [name, fn] : kSchemes) {
      const SchemeOutcome a = fn(in, nullptr);
      const SchemeOutcome b = fn(scaled, nullptr);
      if (a.snr_1 != b.snr_1 || a.snr_2 != b.snr_2) return false;
    }
  }
  return true;
}

bool check_option_dominance() {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const SchemeInput in = random_input(rng, std::exp(rng.uniform(-1.0, 5.0)));
    for (const auto& [name, fn] : kSchemes) {
      SnrBreakdown bd;
      const SchemeOutcome out = fn(in, &bd);
      const double s1 = bd.get("opt1_rate_1") + bd.get("opt1_rate_2");
      const double s2 = bd.get("opt2_rate_1") + bd.get("opt2_rate_2");
      if (out.rate_1 + out.rate_2 + 1e-12 < std::max(s1, s2)) return false;
    }
  }
  return true;
}

bool check_multi_flow_dominance() {
  ExperimentConfig cfg;
  cfg.trials = 1;
  for (int t = 0; t < 30; ++t) {
    const auto r = run_trial(seed_schedule(99, 0, t), cfg,
                             TrialPoint{10.0, 0.5});
    if (r.multi_flow.sum_rate + 1e-12 < r.single_flow.sum_rate) return false;
  }
  return true;
}

bool check_seed_schedule() {
  return seed_schedule(1, 0, 0) != seed_schedule(1, 0, 1) &&
         seed_schedule(1, 0, 0) != seed_schedule(1, 1, 0) &&
         seed_schedule(1, 0, 0) != seed_schedule(2, 0, 0) &&
         seed_schedule(1, 0, 0) == seed_schedule(1, 0, 0);
}

}  // namespace

int run_selftest() {
  const std::vector<std::pair<const char*, std::function<bool()>>> checks = {
      {"capacity_anchor_values", check_capacity_anchors},
      {"af_cascade_below_direct", check_af_inferiority},
      {"valid_permutation_counts", check_permutation_counts},
      {"mobility_turn_frequencies", check_turn_frequencies},
      {"street_adherence_and_path_length", check_street_adherence},
      {"channel_reciprocity_and_cutoff", check_channel_reciprocity},
      {"power_control_exactness", check_power_control},
      {"scheme_decoupling", check_decoupling},
      {"mmse_vs_covariance_oracle", check_mmse_oracle},
      {"gain_rescale_invariance", check_rescale_invariance},
      {"option_dominance", check_option_dominance},
      {"multi_flow_dominance", check_multi_flow_dominance},
      {"seed_schedule_distinct", check_seed_schedule},
  };

  int failed = 0;
  for (const auto& [name, fn] : checks) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      std::printf("[FAIL] %s (exception: %s)\n", name, e.what());
      ++failed;
      continue;
    }
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) ++failed;
  }
  return failed;
}

}  // namespace vanetsim
