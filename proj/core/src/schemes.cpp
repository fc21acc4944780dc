// SPDX-License-Identifier: Apache-2.0
#include "vanetsim/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vanetsim {

namespace {

// All scheme math runs in normalized units: sigma^2 = 1, P = gamma_o.
constexpr double kNoise = 1.0;

void require_gamma(double gamma_o) {
  if (!(gamma_o >= 0.0)) {
    throw std::domain_error("gamma_o must be nonnegative");
  }
}

double require_live(const std::complex<double>& h, const char* link) {
  const double g = std::norm(h);
  if (!(g > 0.0)) {
    throw LinkInfeasibleError(std::string("dead aimed link: ") + link);
  }
  return g;
}

std::complex<double> unit_phase(const std::complex<double>& h) {
  return h / std::abs(h);
}

// Shared option bookkeeping: keeps the option with the larger rate sum,
// option 1 on ties.
struct OptionPick {
  double snr_1, snr_2, rate_1, rate_2;
  int option;
};

OptionPick pick_option(double opt1_snr1, double opt1_snr2, double opt2_snr1,
                       double opt2_snr2, SnrBreakdown* bd) {
  const double r11 = capacity(opt1_snr1);
  const double r12 = capacity(opt1_snr2);
  const double r21 = capacity(opt2_snr1);
  const double r22 = capacity(opt2_snr2);
  if (bd != nullptr) {
    bd->add("opt1_rate_1", r11);
    bd->add("opt1_rate_2", r12);
    bd->add("opt2_rate_1", r21);
    bd->add("opt2_rate_2", r22);
  }
  if (r21 + r22 > r11 + r12) {
    return {opt2_snr1, opt2_snr2, r21, r22, 2};
  }
  return {opt1_snr1, opt1_snr2, r11, r12, 1};
}

SchemeOutcome finish(const OptionPick& pick, double energy, SnrBreakdown* bd) {
  SchemeOutcome out;
  out.snr_1 = pick.snr_1;
  out.snr_2 = pick.snr_2;
  out.rate_1 = pick.rate_1;
  out.rate_2 = pick.rate_2;
  out.option = pick.option;
  out.slots_used = 2;
  out.energy = energy;
  if (bd != nullptr) bd->add("chosen_option", pick.option);
  return out;
}

}  // namespace

CdrScheme classify_cdr(Direction relayed_dir, Direction direct_dir) {
  if (relayed_dir == Direction::Downlink) {
    return direct_dir == Direction::Uplink ? CdrScheme::DlUl : CdrScheme::DlDl;
  }
  return direct_dir == Direction::Downlink ? CdrScheme::UlDl : CdrScheme::UlUl;
}

const char* to_string(Direction d) {
  return d == Direction::Uplink ? "uplink" : "downlink";
}

const char* to_string(RelayMode m) { return m == RelayMode::AF ? "af" : "df"; }

const char* to_string(CdrScheme s) {
  switch (s) {
    case CdrScheme::DlUl: return "cdr-dl-ul";
    case CdrScheme::UlDl: return "cdr-ul-dl";
    case CdrScheme::DlDl: return "cdr-dl-dl";
    case CdrScheme::UlUl: return "cdr-ul-ul";
  }
  return "?";
}

bool simultaneous_slot_is_first_hop(CdrScheme scheme) {
  return scheme == CdrScheme::UlDl || scheme == CdrScheme::UlUl;
}

void SnrBreakdown::add(std::string name, double value) {
  entries_.emplace_back(std::move(name), value);
}

bool SnrBreakdown::has(std::string_view name) const {
  for (const auto& [k, v] : entries_) {
    if (k == name) return true;
  }
  return false;
}

double SnrBreakdown::get(std::string_view name) const {
  for (const auto& [k, v] : entries_) {
    if (k == name) return v;
  }
  throw std::out_of_range("no such SNR entry: " + std::string(name));
}

double capacity(double snr) {
  if (!(snr >= 0.0)) throw std::domain_error("capacity: negative SNR");
  return std::log2(1.0 + snr);
}

double af_relay_e2e_snr(double gamma_o) {
  require_gamma(gamma_o);
  return gamma_o * gamma_o / (2.0 * gamma_o + 1.0);
}

SchemeOutcome noncdr_rates(RelayMode mode, double gamma_o) {
  require_gamma(gamma_o);
  SchemeOutcome out;
  out.snr_1 = mode == RelayMode::AF ? af_relay_e2e_snr(gamma_o) : gamma_o;
  out.snr_2 = gamma_o;
  out.rate_1 = capacity(out.snr_1);
  out.rate_2 = capacity(out.snr_2);
  out.option = 1;
  out.slots_used = 3;
  return out;
}

double mmse_sinr_two_obs(const EffectiveMimoChannel& chan, double noise_power,
                         int target_symbol, bool cancel_other) {
  if (!(chan.xi >= 1.0)) {
    throw std::domain_error("noise enhancement xi must be >= 1");
  }
  if (!(noise_power > 0.0)) {
    throw std::domain_error("noise power must be positive");
  }
  if (target_symbol != 1 && target_symbol != 2) {
    throw std::domain_error("target symbol must be 1 or 2");
  }
  for (const auto& row : chan.h) {
    for (const auto& e : row) {
      if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
        throw std::domain_error("effective channel entry not finite");
      }
    }
  }

  const int k = target_symbol - 1;
  const int j = 1 - k;
  const double n1 = noise_power;
  const double n2 = chan.xi * noise_power;
  const std::complex<double> u = chan.h[0][k];
  const std::complex<double> v = chan.h[1][k];

  if (cancel_other) {
    // Known interferer removed: maximum-ratio combining of both observations.
    return std::norm(u) / n1 + std::norm(v) / n2;
  }

  // SINR = h_k^H (N + h_j h_j^H)^(-1) h_k via the explicit 2x2 inverse.
  const std::complex<double> a = chan.h[0][j];
  const std::complex<double> b = chan.h[1][j];
  const double r11 = n1 + std::norm(a);
  const double r22 = n2 + std::norm(b);
  const std::complex<double> r12 = a * std::conj(b);
  const double det = r11 * r22 - std::norm(r12);
  const double quad = r22 * std::norm(u) + r11 * std::norm(v) -
                      2.0 * std::real(std::conj(u) * r12 * v);
  return quad / det;
}

SchemeOutcome cdr_dl_ul_af(const SchemeInput& in, SnrBreakdown* bd) {
  require_gamma(in.gamma_o);
  const double P = in.gamma_o;
  const double g_hop1 = require_live(in.sn_relay_1, "SN-relay slot 1");
  const double g_hop2 = require_live(in.relay_user_2, "relay-user slot 2");
  const double g_direct = require_live(in.sn_direct_2, "direct-SN slot 2");
  const double g_cross = std::norm(in.user_direct_2) / g_direct;
  const double g_leak = std::norm(in.relay_sn_2) / g_hop2;

  const double alpha = 1.0 / (P + kNoise);
  // Relayed user, option 1: decode x1 with x2 treated as noise.
  const double user1_opt1_x1 =
      alpha * P * P / (g_cross * P + alpha * P * kNoise + kNoise);
  // Relayed user, option 2: decode x2 first, cancel, then x1 cleanly.
  const double user1_opt2_x2 =
      g_cross * P / (alpha * P * P + alpha * P * kNoise + kNoise);
  const double user1_opt2_x1 = alpha * P * P / (alpha * P * kNoise + kNoise);
  // SN cancels its own x1 from the relayed observation; the amplified relay
  // noise leaks in through the relay->SN channel.
  const double sn_x2 = P / (g_leak * alpha * P * kNoise + kNoise);

  if (bd != nullptr) {
    bd->add("alpha", alpha);
    bd->add("user1_opt1_x1", user1_opt1_x1);
    bd->add("user1_opt2_x2", user1_opt2_x2);
    bd->add("user1_opt2_x1", user1_opt2_x1);
    bd->add("sn_x2", sn_x2);
  }

  const auto pick =
      pick_option(user1_opt1_x1, sn_x2, user1_opt2_x1,
                  std::min(user1_opt2_x2, sn_x2), bd);
  const double energy = P / g_hop1 + P / g_hop2 + P / g_direct;
  return finish(pick, energy, bd);
}

SchemeOutcome cdr_dl_ul_df(const SchemeInput& in, SnrBreakdown* bd) {
  require_gamma(in.gamma_o);
  const double P = in.gamma_o;
  const double g_hop1 = require_live(in.sn_relay_1, "SN-relay slot 1");
  const double g_hop2 = require_live(in.relay_user_2, "relay-user slot 2");
  const double g_direct = require_live(in.sn_direct_2, "direct-SN slot 2");
  const double g_cross = std::norm(in.user_direct_2) / g_direct;

  const double gamma = P / kNoise;
  const double relay_x1 = gamma;  // clean slot-1 reception at the relay
  const double user1_opt1_x1 = gamma / (g_cross * gamma + 1.0);
  const double user1_opt2_x2 = g_cross * gamma / (gamma + 1.0);
  const double user1_opt2_x1 = gamma;
  // The relay re-encodes x1, so the SN's cancellation is exact.
  const double sn_x2 = gamma;

  if (bd != nullptr) {
    bd->add("relay_x1", relay_x1);
    bd->add("user1_opt1_x1", user1_opt1_x1);
    bd->add("user1_opt2_x2", user1_opt2_x2);
    bd->add("user1_opt2_x1", user1_opt2_x1);
    bd->add("sn_x2", sn_x2);
  }

  const auto pick = pick_option(
      std::min(user1_opt1_x1, relay_x1), sn_x2,
      std::min(user1_opt2_x1, relay_x1), std::min(user1_opt2_x2, sn_x2), bd);
  const double energy = P / g_hop1 + P / g_hop2 + P / g_direct;
  return finish(pick, energy, bd);
}

namespace {

// Shared final assembly of the relayed-UL + direct-DL scheme once the
// relay's forwarding behavior (AF vs DF) has fixed sn_x1, the second row of
// the direct user's effective channel and xi.
SchemeOutcome finish_ul_dl(const SchemeInput& in, double sn_x1,
                           double relay_x1, const EffectiveMimoChannel& H,
                           double g_hop1, double g_dl, double g_hop2,
                           SnrBreakdown* bd) {
  const double P = in.gamma_o;
  const double u2_x1 = mmse_sinr_two_obs(H, kNoise, 1, false);
  const double u2_x2_cancel = mmse_sinr_two_obs(H, kNoise, 2, true);
  const double u2_x2_direct = mmse_sinr_two_obs(H, kNoise, 2, false);

  if (bd != nullptr) {
    bd->add("xi", H.xi);
    bd->add("user2_opt1_x1", u2_x1);
    bd->add("user2_opt1_x2", u2_x2_cancel);
    bd->add("user2_opt2_x2", u2_x2_direct);
  }

  // Option 1: the direct user decodes x1 first (joint MMSE), cancels it,
  // then decodes its own x2; x1's rate must also survive at the SN and, for
  // DF, at the relay. Option 2: the direct user decodes x2 outright.
  const double opt1_x1 = std::min({sn_x1, u2_x1, relay_x1});
  const double opt2_x1 = std::min(sn_x1, relay_x1);
  const auto pick =
      pick_option(opt1_x1, u2_x2_cancel, opt2_x1, u2_x2_direct, bd);
  const double energy = P / g_hop1 + P / g_dl + P / g_hop2;
  return finish(pick, energy, bd);
}

}  // namespace

SchemeOutcome cdr_ul_dl_af(const SchemeInput& in, SnrBreakdown* bd) {
  require_gamma(in.gamma_o);
  const double P = in.gamma_o;
  const double g_hop1 = require_live(in.user_relay_1, "user-relay slot 1");
  const double g_dl = require_live(in.sn_direct_1, "SN-direct slot 1");
  const double g_hop2 = require_live(in.relay_sn_2, "relay-SN slot 2");
  const double g_leak_relay = std::norm(in.sn_relay_1) / g_dl;

  const double alpha = 1.0 / (P + g_leak_relay * P + kNoise);
  const double sn_x1 = alpha * P * P / (alpha * P * kNoise + kNoise);
  if (bd != nullptr) {
    bd->add("alpha", alpha);
    bd->add("sn_x1", sn_x1);
  }

  const std::complex<double> q =
      in.relay_direct_2 * std::sqrt(alpha * P) / std::abs(in.relay_sn_2);
  EffectiveMimoChannel H;
  H.h[0][0] = in.user_direct_1 * std::sqrt(P) / std::abs(in.user_relay_1);
  H.h[0][1] = unit_phase(in.sn_direct_1) * std::sqrt(P);
  H.h[1][0] = q * in.user_relay_1 * std::sqrt(P) / std::abs(in.user_relay_1);
  H.h[1][1] = q * in.sn_relay_1 * std::sqrt(P) / std::abs(in.sn_direct_1);
  H.xi = 1.0 + std::norm(in.relay_direct_2) / std::norm(in.relay_sn_2) *
                   alpha * P;

  return finish_ul_dl(in, sn_x1, std::numeric_limits<double>::infinity(), H,
                      g_hop1, g_dl, g_hop2, bd);
}

SchemeOutcome cdr_ul_dl_df(const SchemeInput& in, SnrBreakdown* bd) {
  require_gamma(in.gamma_o);
  const double P = in.gamma_o;
  const double g_hop1 = require_live(in.user_relay_1, "user-relay slot 1");
  const double g_dl = require_live(in.sn_direct_1, "SN-direct slot 1");
  const double g_hop2 = require_live(in.relay_sn_2, "relay-SN slot 2");
  const double g_leak_relay = std::norm(in.sn_relay_1) / g_dl;

  // The relay decodes x1 with the overheard x2 as noise, then retransmits a
  // clean re-encoding, so no amplified noise reaches the SN.
  const double relay_x1 = P / (g_leak_relay * P + kNoise);
  const double sn_x1 = P / kNoise;
  if (bd != nullptr) {
    bd->add("relay_x1", relay_x1);
    bd->add("sn_x1", sn_x1);
  }

  EffectiveMimoChannel H;
  H.h[0][0] = in.user_direct_1 * std::sqrt(P) / std::abs(in.user_relay_1);
  H.h[0][1] = unit_phase(in.sn_direct_1) * std::sqrt(P);
  H.h[1][0] = in.relay_direct_2 * std::sqrt(P) / std::abs(in.relay_sn_2);
  H.h[1][1] = 0.0;
  H.xi = 1.0;

  return finish_ul_dl(in, sn_x1, relay_x1, H, g_hop1, g_dl, g_hop2, bd);
}

namespace {

SchemeOutcome finish_dl_dl(const SchemeInput& in, double user1_x1,
                           double relay_x1, const EffectiveMimoChannel& H,
                           double g_hop1, double g_hop2, double g_dl2,
                           SnrBreakdown* bd) {
  const double P = in.gamma_o;
  const double u2_x2_joint = mmse_sinr_two_obs(H, kNoise, 2, false);
  const double u2_x1 = mmse_sinr_two_obs(H, kNoise, 1, false);
  const double u2_x2_cancel = mmse_sinr_two_obs(H, kNoise, 2, true);

  if (bd != nullptr) {
    bd->add("xi", H.xi);
    bd->add("user2_opt1_x2", u2_x2_joint);
    bd->add("user2_opt2_x1", u2_x1);
    bd->add("user2_opt2_x2", u2_x2_cancel);
  }

  // Option 1: the direct user decodes its own x2 with x1 as noise. Option 2:
  // it decodes and cancels x1 first, constraining x1's rate.
  const double x1_chain = std::min(user1_x1, relay_x1);
  const auto pick = pick_option(x1_chain, u2_x2_joint,
                                std::min(x1_chain, u2_x1), u2_x2_cancel, bd);
  const double energy = P / g_hop1 + P / g_hop2 + P / g_dl2;
  return finish(pick, energy, bd);
}

}  // namespace

SchemeOutcome cdr_dl_dl_af(const SchemeInput& in, SnrBreakdown* bd) {
  require_gamma(in.gamma_o);
  const double P = in.gamma_o;
  const double g_hop1 = require_live(in.sn_relay_1, "SN-relay slot 1");
  const double g_hop2 = require_live(in.relay_user_2, "relay-user slot 2");
  const double g_dl2 = require_live(in.sn_direct_2, "SN-direct slot 2");

  const double alpha = 1.0 / (P + kNoise);
  const double user1_x1 = alpha * P * P / (alpha * P * kNoise + kNoise);
  if (bd != nullptr) {
    bd->add("alpha", alpha);
    bd->add("user1_x1", user1_x1);
  }

  const std::complex<double> q =
      in.relay_direct_2 * std::sqrt(alpha * P) / std::abs(in.relay_user_2);
  EffectiveMimoChannel H;
  H.h[0][0] = in.sn_direct_1 * std::sqrt(P) / std::abs(in.sn_relay_1);
  H.h[0][1] = 0.0;
  H.h[1][0] = q * in.sn_relay_1 * std::sqrt(P) / std::abs(in.sn_relay_1);
  H.h[1][1] = unit_phase(in.sn_direct_2) * std::sqrt(P);
  H.xi = 1.0 + std::norm(in.relay_direct_2) / std::norm(in.relay_user_2) *
                   alpha * P;

  return finish_dl_dl(in, user1_x1, std::numeric_limits<double>::infinity(),
                      H, g_hop1, g_hop2, g_dl2, bd);
}

SchemeOutcome cdr_dl_dl_df(const SchemeInput& in, SnrBreakdown* bd) {
  require_gamma(in.gamma_o);
  const double P = in.gamma_o;
  const double g_hop1 = require_live(in.sn_relay_1, "SN-relay slot 1");
  const double g_hop2 = require_live(in.relay_user_2, "relay-user slot 2");
  const double g_dl2 = require_live(in.sn_direct_2, "SN-direct slot 2");

  const double relay_x1 = P / kNoise;
  const double user1_x1 = P / kNoise;  // clean re-encoded second hop
  if (bd != nullptr) {
    bd->add("relay_x1", relay_x1);
    bd->add("user1_x1", user1_x1);
  }

  EffectiveMimoChannel H;
  H.h[0][0] = in.sn_direct_1 * std::sqrt(P) / std::abs(in.sn_relay_1);
  H.h[0][1] = 0.0;
  H.h[1][0] = in.relay_direct_2 * std::sqrt(P) / std::abs(in.relay_user_2);
  H.h[1][1] = unit_phase(in.sn_direct_2) * std::sqrt(P);
  H.xi = 1.0;

  return finish_dl_dl(in, user1_x1, relay_x1, H, g_hop1, g_hop2, g_dl2, bd);
}

namespace {

SchemeOutcome finish_ul_ul(const SchemeInput& in, double relay_x1,
                           const EffectiveMimoChannel& H, double g_hop1,
                           double g_direct, double g_hop2, double rep_energy,
                           SnrBreakdown* bd) {
  const double P = in.gamma_o;
  const double sn_opt1_x1 = mmse_sinr_two_obs(H, kNoise, 1, false);
  const double sn_opt1_x2 = mmse_sinr_two_obs(H, kNoise, 2, true);
  const double sn_opt2_x2 = mmse_sinr_two_obs(H, kNoise, 2, false);
  const double sn_opt2_x1 = mmse_sinr_two_obs(H, kNoise, 1, true);

  if (bd != nullptr) {
    bd->add("xi", H.xi);
    bd->add("sn_opt1_x1", sn_opt1_x1);
    bd->add("sn_opt1_x2", sn_opt1_x2);
    bd->add("sn_opt2_x1", sn_opt2_x1);
    bd->add("sn_opt2_x2", sn_opt2_x2);
  }

  const auto pick =
      pick_option(std::min(sn_opt1_x1, relay_x1), sn_opt1_x2,
                  std::min(sn_opt2_x1, relay_x1), sn_opt2_x2, bd);
  const double energy = P / g_hop1 + P / g_direct + P / g_hop2 + rep_energy;
  return finish(pick, energy, bd);
}

}  // namespace

SchemeOutcome cdr_ul_ul_af(const SchemeInput& in, SnrBreakdown* bd) {
  require_gamma(in.gamma_o);
  if (!(in.beta >= 0.0)) throw std::domain_error("beta must be nonnegative");
  const double P = in.gamma_o;
  const double g_hop1 = require_live(in.user_relay_1, "user-relay slot 1");
  const double g_direct = require_live(in.sn_direct_1, "direct-SN slot 1");
  const double g_hop2 = require_live(in.relay_sn_2, "relay-SN slot 2");
  const double g_leak = std::norm(in.relay_direct_1) / g_direct;

  const double alpha = 1.0 / (P + g_leak * P + kNoise);
  if (bd != nullptr) bd->add("alpha", alpha);

  // Repetition of x2 rides on the slot-2 direct-user channel; a dead link
  // simply disables it.
  const double g_rep = std::norm(in.sn_direct_2);
  const bool repeat = in.beta > 0.0 && g_rep > 0.0;
  const std::complex<double> rep =
      repeat ? unit_phase(in.sn_direct_2) * std::sqrt(in.beta * P)
             : std::complex<double>{0.0, 0.0};

  const std::complex<double> q =
      unit_phase(in.relay_sn_2) * std::sqrt(alpha * P);
  EffectiveMimoChannel H;
  H.h[0][0] = 0.0;
  H.h[0][1] = unit_phase(in.sn_direct_1) * std::sqrt(P);
  H.h[1][0] = q * in.user_relay_1 * std::sqrt(P) / std::abs(in.user_relay_1);
  H.h[1][1] =
      q * in.relay_direct_1 * std::sqrt(P) / std::abs(in.sn_direct_1) + rep;
  H.xi = 1.0 + alpha * P;

  const double rep_energy = repeat ? in.beta * P / g_rep : 0.0;
  return finish_ul_ul(in, std::numeric_limits<double>::infinity(), H, g_hop1,
                      g_direct, g_hop2, rep_energy, bd);
}

SchemeOutcome cdr_ul_ul_df(const SchemeInput& in, SnrBreakdown* bd) {
  require_gamma(in.gamma_o);
  if (!(in.beta >= 0.0)) throw std::domain_error("beta must be nonnegative");
  const double P = in.gamma_o;
  const double g_hop1 = require_live(in.user_relay_1, "user-relay slot 1");
  const double g_direct = require_live(in.sn_direct_1, "direct-SN slot 1");
  const double g_hop2 = require_live(in.relay_sn_2, "relay-SN slot 2");
  const double g_leak = std::norm(in.relay_direct_1) / g_direct;

  const double relay_x1 = P / (g_leak * P + kNoise);
  if (bd != nullptr) bd->add("relay_x1", relay_x1);

  const double g_rep = std::norm(in.sn_direct_2);
  const bool repeat = in.beta > 0.0 && g_rep > 0.0;
  const std::complex<double> rep =
      repeat ? unit_phase(in.sn_direct_2) * std::sqrt(in.beta * P)
             : std::complex<double>{0.0, 0.0};

  EffectiveMimoChannel H;
  H.h[0][0] = 0.0;
  H.h[0][1] = unit_phase(in.sn_direct_1) * std::sqrt(P);
  H.h[1][0] = unit_phase(in.relay_sn_2) * std::sqrt(P);
  H.h[1][1] = rep;
  H.xi = 1.0;

  const double rep_energy = repeat ? in.beta * P / g_rep : 0.0;
  return finish_ul_ul(in, relay_x1, H, g_hop1, g_direct, g_hop2, rep_energy,
                      bd);
}

SchemeOutcome scheme_dispatch(Direction relayed_dir, Direction direct_dir,
                              RelayMode mode, const SchemeInput& in,
                              SnrBreakdown* bd) {
  const bool af = mode == RelayMode::AF;
  switch (classify_cdr(relayed_dir, direct_dir)) {
    case CdrScheme::DlUl: return af ? cdr_dl_ul_af(in, bd) : cdr_dl_ul_df(in, bd);
    case CdrScheme::UlDl: return af ? cdr_ul_dl_af(in, bd) : cdr_ul_dl_df(in, bd);
    case CdrScheme::DlDl: return af ? cdr_dl_dl_af(in, bd) : cdr_dl_dl_df(in, bd);
    case CdrScheme::UlUl: return af ? cdr_ul_ul_af(in, bd) : cdr_ul_ul_df(in, bd);
  }
  throw std::logic_error("unreachable scheme dispatch");
}

}  // namespace vanetsim
