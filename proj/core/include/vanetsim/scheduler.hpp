// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vanetsim/channel.hpp"
#include "vanetsim/schemes.hpp"

namespace vanetsim {

inline constexpr int kDefaultPermCap = 5;

/// perm[pos-1] is the nominal slot occupying position pos. Nominal slots
/// 2i-1 and 2i belong to user i; a permutation is valid iff slot 2i-1
/// precedes slot 2i for every user.
using Permutation = std::vector<int>;

bool is_valid_permutation(const Permutation& perm);

/// Visits every valid permutation of the 2n nominal slots in lexicographic
/// order: exactly (2n)!/2^n of them, no duplicates. Refuses n_users beyond
/// the cap unless allow_over_cap is set (the search is factorial).
void for_each_valid_permutation(int n_users,
                                const std::function<void(const Permutation&)>& fn,
                                int cap = kDefaultPermCap,
                                bool allow_over_cap = false);

std::vector<Permutation> collect_valid_permutations(
    int n_users, int cap = kDefaultPermCap, bool allow_over_cap = false);

enum class SlotKind {
  Empty,
  Direct,
  Hop1,
  Hop2,
  CdrSingle,        // the lone relay hop of a combined pair
  CdrSimultaneous,  // direct transmission + the other relay hop
};

struct SlotAssignment {
  SlotKind kind = SlotKind::Empty;
  int user = -1;         // served user (relayed user for CDR slots)
  int relay = -1;        // -1: none / in outage
  int paired_user = -1;  // direct user of a CDR pair
  CdrScheme scheme = CdrScheme::DlUl;

  bool empty() const { return kind == SlotKind::Empty; }
};

enum class UserMode { Direct, Relayed, Outage, CdrRelayed, CdrDirect };

const char* to_string(SlotKind k);
const char* to_string(UserMode m);

struct UserOutcome {
  UserMode mode = UserMode::Outage;
  int slot_a = -1;  // Direct: the used position. Relayed/CDR: earlier slot.
  int slot_b = -1;  // Relayed/CDR: later slot. Direct: unused.
  int relay = -1;
  int cdr_partner = -1;
  int cdr_option = 0;
  double snr = 0.0;
  double rate = 0.0;    // bits/s/Hz delivered to this user
  double energy = 0.0;  // transmit energy spent on this user's traffic
};

struct ScheduleMetrics {
  double sum_rate = 0.0;  // sum of user rates / n_total
  int n_total = 0;        // occupied positions
  int n_relayed = 0;      // users consuming two slots (incl. outage)
  int n_direct = 0;
  double energy = 0.0;
};

struct Schedule {
  std::vector<SlotAssignment> slots;  // positions 1..2n at index pos-1
  std::vector<UserOutcome> users;     // users 1..n at index user-1
  ScheduleMetrics metrics;
};

/// Everything a schedule evaluation reads. Vehicles are trajectory nodes;
/// ids 1..num_users carry traffic, higher ids are background relay
/// candidates.
struct ScheduleContext {
  const TrajectoryTable* traj = nullptr;
  const ChannelRealization* chan = nullptr;
  const ChannelModel* model = nullptr;
  RelayMode relay_mode = RelayMode::AF;
  std::vector<Direction> directions;  // [user-1]
  int num_users = 0;
  double beta = 1.0;
  Vec2 sn_position{0.0, 0.0};
};

/// Applies the slot-selection rule to one permutation: a user connected in
/// exactly one of its two positions goes direct there; connected in both, it
/// goes direct in the closer one; connected in neither, its positions carry
/// the two relay hops, with the relay chosen to maximize the bottleneck
/// aimed-link gain among in-disk, unoccupied vehicles (none -> outage).
Schedule apply_slot_selection(const Permutation& perm,
                              const ScheduleContext& ctx);

/// Fills per-user SINRs, rates, energies and the schedule metrics.
/// sum_rate = sum of user capacities / occupied slots.
void evaluate(Schedule& schedule, const ScheduleContext& ctx);

/// Exhaustive search over all valid permutations; returns the schedule with
/// the highest sum-rate, ties broken by enumeration order.
Schedule optimize_single_flow(const ScheduleContext& ctx,
                              int cap = kDefaultPermCap,
                              bool allow_over_cap = false);

/// Greedy improvement of a single-flow schedule by combining a relayed user
/// with a direct user into a two-slot scheme. Candidate pairs are scanned in
/// descending relayed-user rate; for each pair the rigid (slot, slot+1) pair
/// slides across all positions that are empty or freed by the move, with the
/// direct user still inside the disk at its transmission slot and a feasible
/// relay at the new hop times. The best placement is accepted only when it
/// strictly improves the sum-rate; passes repeat until fixpoint. Never
/// returns a schedule worse than the input.
Schedule combine_multi_flow(const Schedule& single, const ScheduleContext& ctx);

/// CSV: position,kind,user,relay,paired_user,snr_db,rate
void schedule_to_csv(const Schedule& schedule, std::ostream& os);

/// Fixed-width table of two schedules over the same realization, one row per
/// position, with per-user SNR/rate and the metric lines underneath.
std::string format_schedule_comparison(const Schedule& single,
                                       const Schedule& multi);

}  // namespace vanetsim
