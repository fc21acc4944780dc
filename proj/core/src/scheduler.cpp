// SPDX-License-Identifier: Apache-2.0
#include "vanetsim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace vanetsim {

namespace {

std::string cap_message(int n_users, int cap) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "permutation search is factorial: users=%d exceeds the cap of "
                "%d ((2n)! schedules); set allow_over_cap to force",
                n_users, cap);
  return buf;
}

}  // namespace

bool is_valid_permutation(const Permutation& perm) {
  std::vector<char> seen(perm.size() + 1, 0);
  for (int slot : perm) {
    if (slot < 1 || slot > static_cast<int>(perm.size()) || seen[slot]) {
      return false;
    }
    if (slot % 2 == 0 && !seen[slot - 1]) return false;
    seen[slot] = 1;
  }
  return true;
}

void for_each_valid_permutation(int n_users,
                                const std::function<void(const Permutation&)>& fn,
                                int cap, bool allow_over_cap) {
  if (n_users < 1) throw ConfigError("users must be >= 1");
  if (n_users > cap && !allow_over_cap) {
    throw CapError(cap_message(n_users, cap));
  }
  Permutation perm(2 * n_users);
  std::iota(perm.begin(), perm.end(), 1);
  do {
    if (is_valid_permutation(perm)) fn(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

std::vector<Permutation> collect_valid_permutations(int n_users, int cap,
                                                    bool allow_over_cap) {
  std::vector<Permutation> out;
  for_each_valid_permutation(
      n_users, [&](const Permutation& p) { out.push_back(p); }, cap,
      allow_over_cap);
  return out;
}

const char* to_string(SlotKind k) {
  switch (k) {
    case SlotKind::Empty: return "empty";
    case SlotKind::Direct: return "direct";
    case SlotKind::Hop1: return "hop1";
    case SlotKind::Hop2: return "hop2";
    case SlotKind::CdrSingle: return "cdr_single";
    case SlotKind::CdrSimultaneous: return "cdr_sim";
  }
  return "?";
}

const char* to_string(UserMode m) {
  switch (m) {
    case UserMode::Direct: return "direct";
    case UserMode::Relayed: return "relayed";
    case UserMode::Outage: return "outage";
    case UserMode::CdrRelayed: return "cdr_relayed";
    case UserMode::CdrDirect: return "cdr_direct";
  }
  return "?";
}

namespace {

int num_vehicles(const ScheduleContext& ctx) {
  return static_cast<int>(ctx.traj->node_ids().size());
}

bool busy_at(const Schedule& s, int node, int pos) {
  const SlotAssignment& a = s.slots[pos - 1];
  if (a.empty()) return false;
  return a.user == node || a.relay == node || a.paired_user == node;
}

// Hop link endpoints for a relayed user: the first hop runs source -> relay,
// the second relay -> destination. Uplink: user -> relay -> SN; downlink:
// SN -> relay -> user.
struct HopLinks {
  int hop1_a, hop1_b;  // nodes of the first-hop aimed link
  int hop2_a, hop2_b;
};

HopLinks hop_links(int user, int relay, Direction dir) {
  if (dir == Direction::Uplink) return {user, relay, relay, 0};
  return {0, relay, relay, user};
}

/// Best relay for `user` with hops at positions (t1, t2): an in-disk,
/// unoccupied vehicle maximizing min(|h_hop1|^2, |h_hop2|^2). Returns -1 when
/// none qualifies.
int select_relay(const Schedule& s, const ScheduleContext& ctx, int user,
                 int t1, int t2, int exclude = -1) {
  const Direction dir = ctx.directions[user - 1];
  int best = -1;
  double best_score = 0.0;
  for (int w = 1; w <= num_vehicles(ctx); ++w) {
    if (w == user || w == exclude) continue;
    if (busy_at(s, w, t1) || busy_at(s, w, t2)) continue;
    const HopLinks links = hop_links(user, w, dir);
    const double g1 = ctx.chan->power_gain(links.hop1_a, links.hop1_b, t1);
    const double g2 = ctx.chan->power_gain(links.hop2_a, links.hop2_b, t2);
    if (!(g1 > 0.0) || !(g2 > 0.0)) continue;
    const double score = std::min(g1, g2);
    if (score > best_score) {
      best_score = score;
      best = w;
    }
  }
  return best;
}

}  // namespace

Schedule apply_slot_selection(const Permutation& perm,
                              const ScheduleContext& ctx) {
  const int n = ctx.num_users;
  const int num_slots = 2 * n;
  if (static_cast<int>(perm.size()) != num_slots ||
      !is_valid_permutation(perm)) {
    throw std::invalid_argument("invalid permutation for this user count");
  }

  std::vector<int> pos_of(num_slots + 1, 0);
  for (int pos = 1; pos <= num_slots; ++pos) pos_of[perm[pos - 1]] = pos;

  Schedule s;
  s.slots.assign(num_slots, SlotAssignment{});
  s.users.assign(n, UserOutcome{});

  const double radius = ctx.model->disk_radius;
  for (int u = 1; u <= n; ++u) {
    const int p1 = pos_of[2 * u - 1];
    const int p2 = pos_of[2 * u];
    const double d1 = distance(ctx.traj->at(u, p1), ctx.sn_position);
    const double d2 = distance(ctx.traj->at(u, p2), ctx.sn_position);
    const bool c1 = d1 <= radius;
    const bool c2 = d2 <= radius;
    UserOutcome& out = s.users[u - 1];
    if (c1 || c2) {
      // Direct in the only feasible slot, or the closer of the two.
      const int chosen = (c1 && c2) ? (d1 <= d2 ? p1 : p2) : (c1 ? p1 : p2);
      out.mode = UserMode::Direct;
      out.slot_a = chosen;
      s.slots[chosen - 1] = {SlotKind::Direct, u, -1, -1, CdrScheme::DlUl};
    } else {
      out.mode = UserMode::Relayed;
      out.slot_a = p1;
      out.slot_b = p2;
      s.slots[p1 - 1] = {SlotKind::Hop1, u, -1, -1, CdrScheme::DlUl};
      s.slots[p2 - 1] = {SlotKind::Hop2, u, -1, -1, CdrScheme::DlUl};
    }
  }

  for (int u = 1; u <= n; ++u) {
    UserOutcome& out = s.users[u - 1];
    if (out.mode != UserMode::Relayed) continue;
    const int relay = select_relay(s, ctx, u, out.slot_a, out.slot_b);
    if (relay < 0) {
      out.mode = UserMode::Outage;
      continue;
    }
    out.relay = relay;
    s.slots[out.slot_a - 1].relay = relay;
    s.slots[out.slot_b - 1].relay = relay;
  }
  return s;
}

namespace {

/// Channel coefficients of a combined pair: relayed user u1 via `relay`,
/// direct user u2, scheme slots at positions (t1, t2).
SchemeInput build_scheme_input(const ScheduleContext& ctx, int u1, int u2,
                               int relay, int t1, int t2) {
  const ChannelRealization& ch = *ctx.chan;
  SchemeInput in;
  in.gamma_o = ctx.model->gamma_o();
  in.beta = ctx.beta;
  in.sn_relay_1 = ch.gain(0, relay, t1);
  in.user_relay_1 = ch.gain(u1, relay, t1);
  in.sn_direct_1 = ch.gain(0, u2, t1);
  in.user_direct_1 = ch.gain(u1, u2, t1);
  in.relay_direct_1 = ch.gain(relay, u2, t1);
  in.relay_user_2 = ch.gain(relay, u1, t2);
  in.relay_sn_2 = ch.gain(relay, 0, t2);
  in.sn_direct_2 = ch.gain(0, u2, t2);
  in.relay_direct_2 = ch.gain(relay, u2, t2);
  in.user_direct_2 = ch.gain(u1, u2, t2);
  return in;
}

}  // namespace

void evaluate(Schedule& s, const ScheduleContext& ctx) {
  const ChannelModel& model = *ctx.model;
  const double P = model.received_power;
  const double gamma = model.gamma_o();

  for (int u = 1; u <= ctx.num_users; ++u) {
    UserOutcome& out = s.users[u - 1];
    out.snr = 0.0;
    out.rate = 0.0;
    out.energy = 0.0;
    switch (out.mode) {
      case UserMode::Direct: {
        const double g = ctx.chan->power_gain(u, 0, out.slot_a);
        if (g > 0.0) {  // a dead in-disk link leaves the user at rate zero
          out.snr = gamma;
          out.rate = capacity(gamma);
          out.energy = P / g;
        }
        break;
      }
      case UserMode::Relayed: {
        const HopLinks links =
            hop_links(u, out.relay, ctx.directions[u - 1]);
        const double g1 =
            ctx.chan->power_gain(links.hop1_a, links.hop1_b, out.slot_a);
        const double g2 =
            ctx.chan->power_gain(links.hop2_a, links.hop2_b, out.slot_b);
        out.snr = ctx.relay_mode == RelayMode::AF ? af_relay_e2e_snr(gamma)
                                                  : gamma;
        out.rate = capacity(out.snr);
        out.energy = P / g1 + P / g2;
        break;
      }
      case UserMode::Outage:
        break;
      case UserMode::CdrRelayed:
      case UserMode::CdrDirect:
        break;  // handled pairwise below
    }
  }

  // Combined pairs: one evaluation fills both users.
  for (int pos = 1; pos <= static_cast<int>(s.slots.size()); ++pos) {
    const SlotAssignment& a = s.slots[pos - 1];
    if (a.kind != SlotKind::CdrSingle) continue;
    const int u1 = a.user;
    const int u2 = a.paired_user;
    UserOutcome& o1 = s.users[u1 - 1];
    UserOutcome& o2 = s.users[u2 - 1];
    const int t1 = o1.slot_a;
    const int t2 = o1.slot_b;
    const SchemeInput in = build_scheme_input(ctx, u1, u2, a.relay, t1, t2);
    const SchemeOutcome res =
        scheme_dispatch(ctx.directions[u1 - 1], ctx.directions[u2 - 1],
                        ctx.relay_mode, in);
    o1.snr = res.snr_1;
    o1.rate = res.rate_1;
    o1.cdr_option = res.option;
    o2.snr = res.snr_2;
    o2.rate = res.rate_2;
    o2.cdr_option = res.option;

    const HopLinks links = hop_links(u1, a.relay, ctx.directions[u1 - 1]);
    o1.energy = P / ctx.chan->power_gain(links.hop1_a, links.hop1_b, t1) +
                P / ctx.chan->power_gain(links.hop2_a, links.hop2_b, t2);
    const CdrScheme scheme =
        classify_cdr(ctx.directions[u1 - 1], ctx.directions[u2 - 1]);
    const int direct_t = simultaneous_slot_is_first_hop(scheme) ? t1 : t2;
    o2.energy = P / ctx.chan->power_gain(u2, 0, direct_t);
    if (scheme == CdrScheme::UlUl && ctx.beta > 0.0) {
      const double g_rep = ctx.chan->power_gain(u2, 0, t2);
      if (g_rep > 0.0) o2.energy += ctx.beta * P / g_rep;
    }
  }

  ScheduleMetrics m;
  for (const auto& slot : s.slots) {
    if (!slot.empty()) ++m.n_total;
  }
  for (const auto& user : s.users) {
    if (user.mode == UserMode::Relayed || user.mode == UserMode::Outage) {
      ++m.n_relayed;
    } else if (user.mode == UserMode::Direct) {
      ++m.n_direct;
    }
    m.sum_rate += user.rate;
    m.energy += user.energy;
  }
  m.sum_rate = m.n_total > 0 ? m.sum_rate / m.n_total : 0.0;
  s.metrics = m;
}

Schedule optimize_single_flow(const ScheduleContext& ctx, int cap,
                              bool allow_over_cap) {
  Schedule best;
  bool have = false;
  for_each_valid_permutation(
      ctx.num_users,
      [&](const Permutation& perm) {
        Schedule s = apply_slot_selection(perm, ctx);
        evaluate(s, ctx);
        if (!have || s.metrics.sum_rate > best.metrics.sum_rate) {
          best = std::move(s);
          have = true;
        }
      },
      cap, allow_over_cap);
  return best;
}

namespace {

bool free_or_freed(const Schedule& s, int pos, int u1, int u2) {
  const SlotAssignment& a = s.slots[pos - 1];
  if (a.empty()) return true;
  if (a.kind == SlotKind::Hop1 || a.kind == SlotKind::Hop2) return a.user == u1;
  if (a.kind == SlotKind::Direct) return a.user == u2;
  return false;
}

void clear_user_slots(Schedule& s, int user) {
  const UserOutcome& out = s.users[user - 1];
  if (out.slot_a >= 1) s.slots[out.slot_a - 1] = SlotAssignment{};
  if (out.slot_b >= 1) s.slots[out.slot_b - 1] = SlotAssignment{};
}

}  // namespace

Schedule combine_multi_flow(const Schedule& single,
                            const ScheduleContext& ctx) {
  Schedule cur = single;
  const int num_slots = static_cast<int>(cur.slots.size());

  bool improved = true;
  while (improved) {
    improved = false;

    // Relayed users in descending current rate (outage users last), ties by
    // id; each in turn looks for its best combination.
    std::vector<int> relayed;
    for (int u = 1; u <= ctx.num_users; ++u) {
      const UserMode mode = cur.users[u - 1].mode;
      if (mode == UserMode::Relayed || mode == UserMode::Outage) {
        relayed.push_back(u);
      }
    }
    std::stable_sort(relayed.begin(), relayed.end(), [&](int a, int b) {
      return cur.users[a - 1].rate > cur.users[b - 1].rate;
    });

    for (int u1 : relayed) {
      const UserMode m1 = cur.users[u1 - 1].mode;
      if (m1 != UserMode::Relayed && m1 != UserMode::Outage) continue;

      Schedule best;
      bool have_best = false;
      for (int u2 = 1; u2 <= ctx.num_users; ++u2) {
        if (u2 == u1 || cur.users[u2 - 1].mode != UserMode::Direct) continue;
        const CdrScheme scheme =
            classify_cdr(ctx.directions[u1 - 1], ctx.directions[u2 - 1]);
        const bool sim_first = simultaneous_slot_is_first_hop(scheme);

        for (int p = 1; p < num_slots; ++p) {
          const int t1 = p;
          const int t2 = p + 1;
          if (!free_or_freed(cur, t1, u1, u2) ||
              !free_or_freed(cur, t2, u1, u2)) {
            continue;
          }
          // The direct user must still be direct at its transmission slot.
          const int direct_t = sim_first ? t1 : t2;
          if (!is_connected(ctx.traj->at(u2, direct_t), ctx.sn_position,
                            ctx.model->disk_radius)) {
            continue;
          }
          if (!(ctx.chan->power_gain(u2, 0, direct_t) > 0.0)) continue;

          Schedule tentative = cur;
          clear_user_slots(tentative, u1);
          clear_user_slots(tentative, u2);

          const int relay = select_relay(tentative, ctx, u1, t1, t2, u2);
          if (relay < 0) continue;

          const int single_pos = sim_first ? t2 : t1;
          const int sim_pos = sim_first ? t1 : t2;
          tentative.slots[single_pos - 1] = {SlotKind::CdrSingle, u1, relay,
                                             u2, scheme};
          tentative.slots[sim_pos - 1] = {SlotKind::CdrSimultaneous, u2, relay,
                                          u1, scheme};
          UserOutcome& o1 = tentative.users[u1 - 1];
          o1 = UserOutcome{};
          o1.mode = UserMode::CdrRelayed;
          o1.slot_a = t1;
          o1.slot_b = t2;
          o1.relay = relay;
          o1.cdr_partner = u2;
          UserOutcome& o2 = tentative.users[u2 - 1];
          o2 = UserOutcome{};
          o2.mode = UserMode::CdrDirect;
          o2.slot_a = t1;
          o2.slot_b = t2;
          o2.relay = relay;
          o2.cdr_partner = u1;

          evaluate(tentative, ctx);
          if (!have_best ||
              tentative.metrics.sum_rate > best.metrics.sum_rate) {
            best = std::move(tentative);
            have_best = true;
          }
        }
      }

      if (have_best && best.metrics.sum_rate > cur.metrics.sum_rate) {
        cur = std::move(best);
        improved = true;
      }
    }
  }
  return cur;
}

void schedule_to_csv(const Schedule& s, std::ostream& os) {
  os << "position,kind,user,relay,paired_user,snr_db,rate\n";
  char buf[192];
  for (int pos = 1; pos <= static_cast<int>(s.slots.size()); ++pos) {
    const SlotAssignment& a = s.slots[pos - 1];
    double snr_db = -std::numeric_limits<double>::infinity();
    double rate = 0.0;
    if (!a.empty() && a.user >= 1) {
      const UserOutcome& out = s.users[a.user - 1];
      snr_db = out.snr > 0.0 ? linear_to_db(out.snr)
                             : -std::numeric_limits<double>::infinity();
      rate = out.rate;
    }
    std::snprintf(buf, sizeof(buf), "%d,%s,%d,%d,%d,%.12g,%.12g\n", pos,
                  to_string(a.kind), a.user, a.relay, a.paired_user, snr_db,
                  rate);
    os << buf;
  }
}

namespace {

std::string slot_label(const SlotAssignment& a) {
  if (a.empty()) return "-";
  char buf[64];
  switch (a.kind) {
    case SlotKind::Direct:
      std::snprintf(buf, sizeof(buf), "U%d direct", a.user);
      break;
    case SlotKind::Hop1:
    case SlotKind::Hop2:
      std::snprintf(buf, sizeof(buf), "U%d %s R=%s%d", a.user,
                    a.kind == SlotKind::Hop1 ? "hop1" : "hop2",
                    a.relay > 0 ? "U" : "", a.relay > 0 ? a.relay : 0);
      break;
    case SlotKind::CdrSingle:
      std::snprintf(buf, sizeof(buf), "U%d hop R=U%d (pair U%d)", a.user,
                    a.relay, a.paired_user);
      break;
    case SlotKind::CdrSimultaneous:
      std::snprintf(buf, sizeof(buf), "U%d direct + U%d hop R=U%d", a.user,
                    a.paired_user, a.relay);
      break;
    default:
      return "-";
  }
  return buf;
}

void append_user_lines(std::ostringstream& os, const Schedule& s,
                       const char* title) {
  char buf[192];
  os << title << "\n";
  for (int u = 1; u <= static_cast<int>(s.users.size()); ++u) {
    const UserOutcome& out = s.users[u - 1];
    const double snr_db = out.snr > 0.0
                              ? linear_to_db(out.snr)
                              : -std::numeric_limits<double>::infinity();
    std::snprintf(buf, sizeof(buf),
                  "  U%-2d %-12s relay=%-3d snr=%8.3f dB  rate=%7.4f  "
                  "energy=%10.4g\n",
                  u, to_string(out.mode), out.relay, snr_db, out.rate,
                  out.energy);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "  sum_rate=%.6f bits/s/Hz/slot  n_T=%d  energy=%.6g\n",
                s.metrics.sum_rate, s.metrics.n_total, s.metrics.energy);
  os << buf;
}

}  // namespace

std::string format_schedule_comparison(const Schedule& single,
                                       const Schedule& multi) {
  std::ostringstream os;
  char buf[160];
  os << "pos  single-flow                        multi-flow\n";
  for (int pos = 1; pos <= static_cast<int>(single.slots.size()); ++pos) {
    std::snprintf(buf, sizeof(buf), "%3d  %-34s %-34s\n", pos,
                  slot_label(single.slots[pos - 1]).c_str(),
                  slot_label(multi.slots[pos - 1]).c_str());
    os << buf;
  }
  append_user_lines(os, single, "single-flow users:");
  append_user_lines(os, multi, "multi-flow users:");
  const double rel_energy =
      single.metrics.energy > 0.0
          ? std::abs(multi.metrics.energy - single.metrics.energy) /
                single.metrics.energy
          : 0.0;
  std::snprintf(buf, sizeof(buf), "relative energy difference: %.6g\n",
                rel_energy);
  os << buf;
  return os.str();
}

}  // namespace vanetsim
