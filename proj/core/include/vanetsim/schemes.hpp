// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "vanetsim/errors.hpp"

namespace vanetsim {

enum class Direction { Uplink, Downlink };
enum class RelayMode { AF, DF };

/// The four ways one relayed user and one direct user can be paired in a
/// two-slot combined scheme, named by (relayed direction, direct direction).
enum class CdrScheme { DlUl, UlDl, DlDl, UlUl };

CdrScheme classify_cdr(Direction relayed_dir, Direction direct_dir);

const char* to_string(Direction d);
const char* to_string(RelayMode m);
const char* to_string(CdrScheme s);

/// Channel coefficients feeding one two-slot combined-scheme evaluation.
/// "user" is the relayed user, "direct" the direct user; suffix _1/_2 is the
/// slot. Aimed links are power-controlled (the receiver sees power P);
/// interference terms enter as gain ratios against the aimed link of the
/// same transmitter, so only ratios and gamma_o matter. Fields a scheme does
/// not use are ignored; zero means the link is dead.
struct SchemeInput {
  double gamma_o = 1.0;  // P / sigma^2 on every power-controlled aimed link
  double beta = 1.0;     // repetition power factor, UlUl scheme only

  // slot 1
  std::complex<double> sn_relay_1;      // SN <-> relay
  std::complex<double> user_relay_1;    // relayed user <-> relay
  std::complex<double> sn_direct_1;     // SN <-> direct user
  std::complex<double> user_direct_1;   // relayed user <-> direct user
  std::complex<double> relay_direct_1;  // relay <-> direct user

  // slot 2
  std::complex<double> relay_user_2;   // relay <-> relayed user
  std::complex<double> relay_sn_2;     // relay <-> SN
  std::complex<double> sn_direct_2;    // SN <-> direct user
  std::complex<double> relay_direct_2; // relay <-> direct user
  std::complex<double> user_direct_2;  // relayed user <-> direct user
};

struct SchemeOutcome {
  double rate_1 = 0.0;  // relayed user, bits/s/Hz
  double rate_2 = 0.0;  // direct user, bits/s/Hz
  double snr_1 = 0.0;   // end SINR behind rate_1 (after any min-bottleneck)
  double snr_2 = 0.0;
  int option = 1;       // winning decoding option
  int slots_used = 0;
  double energy = 0.0;  // sum over transmissions of P/|h_aimed|^2
};

/// Ordered (name, value) table of every intermediate SINR symbol computed
/// during a scheme evaluation; feeds the scheme-eval CLI and the formula
/// fidelity tests.
class SnrBreakdown {
 public:
  void add(std::string name, double value);
  double get(std::string_view name) const;  // throws std::out_of_range
  bool has(std::string_view name) const;
  const std::vector<std::pair<std::string, double>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

/// Shannon capacity log2(1 + snr) in bits/s/Hz. Negative snr is a domain
/// error.
double capacity(double snr);

/// End-to-end SINR of the two-hop amplify-and-forward cascade with power
/// control on both hops: gamma^2 / (2*gamma + 1). Strictly below gamma for
/// gamma > 0.
double af_relay_e2e_snr(double gamma_o);

/// Conventional (uncombined) two-user outcome: the relayed user takes two
/// slots, the direct user one. AF: (C(af_relay_e2e_snr), C(gamma_o));
/// DF: (C(gamma_o), C(gamma_o)). Energy is accounted by the caller, which
/// knows the link gains.
SchemeOutcome noncdr_rates(RelayMode mode, double gamma_o);

/// Two stacked observations y_i = h[i][0]*x1 + h[i][1]*x2 + z_i with noise
/// variances (sigma^2, xi*sigma^2). xi >= 1 is the noise enhancement of the
/// second observation caused by amplified relay noise.
struct EffectiveMimoChannel {
  std::array<std::array<std::complex<double>, 2>, 2> h{};  // h[obs][symbol]
  double xi = 1.0;
};

/// Linear-MMSE SINR of x_target (1 or 2) from the two observations. With
/// cancel_other the other symbol is known and removed before filtering
/// (maximum-ratio combining over both observations); otherwise it is treated
/// as noise. A zero target column yields SINR 0.
double mmse_sinr_two_obs(const EffectiveMimoChannel& chan, double noise_power,
                         int target_symbol, bool cancel_other);

/// Relayed downlink paired with direct uplink. Slot 1: SN -> relay alone.
/// Slot 2: relay -> relayed user while the direct user transmits to the SN.
/// The SN cancels the known x1 before decoding x2. Decoding options at the
/// relayed user: (1) decode x1 treating x2 as noise, (2) decode x2 first,
/// cancel it, then decode x1 cleanly.
SchemeOutcome cdr_dl_ul_af(const SchemeInput& in, SnrBreakdown* bd = nullptr);
SchemeOutcome cdr_dl_ul_df(const SchemeInput& in, SnrBreakdown* bd = nullptr);

/// Relayed uplink paired with direct downlink. Slot 1 (simultaneous): the
/// relayed user transmits to the relay while the SN transmits the direct
/// user's downlink. Slot 2: relay -> SN alone; the SN cancels its own x2
/// from the relayed observation; the direct user combines its two
/// observations through a 2x2 effective channel.
SchemeOutcome cdr_ul_dl_af(const SchemeInput& in, SnrBreakdown* bd = nullptr);
SchemeOutcome cdr_ul_dl_df(const SchemeInput& in, SnrBreakdown* bd = nullptr);

/// Relayed downlink paired with direct downlink. Slot 1: SN -> relay; the
/// direct user overhears x1. Slot 2 (simultaneous): relay -> relayed user
/// while SN -> direct user; the direct user jointly processes both slots
/// (lower-triangular effective channel).
SchemeOutcome cdr_dl_dl_af(const SchemeInput& in, SnrBreakdown* bd = nullptr);
SchemeOutcome cdr_dl_dl_df(const SchemeInput& in, SnrBreakdown* bd = nullptr);

/// Relayed uplink paired with direct uplink. Slot 1 (simultaneous): relayed
/// user -> relay while direct user -> SN. Slot 2: relay -> SN while the
/// direct user repeats x2 at power factor beta; the SN is the sole decoder
/// of both symbols from its two observations.
SchemeOutcome cdr_ul_ul_af(const SchemeInput& in, SnrBreakdown* bd = nullptr);
SchemeOutcome cdr_ul_ul_df(const SchemeInput& in, SnrBreakdown* bd = nullptr);

/// Routes a (relayed direction, direct direction, relay mode) triple to the
/// matching combined scheme.
SchemeOutcome scheme_dispatch(Direction relayed_dir, Direction direct_dir,
                              RelayMode mode, const SchemeInput& in,
                              SnrBreakdown* bd = nullptr);

/// True when the simultaneous slot carries the first relay hop (relayed
/// uplink schemes); false when it carries the second hop (relayed downlink
/// schemes).
bool simultaneous_slot_is_first_hop(CdrScheme scheme);

}  // namespace vanetsim
