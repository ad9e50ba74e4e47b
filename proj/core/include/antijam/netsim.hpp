#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "antijam/jammers.hpp"
#include "antijam/types.hpp"

namespace antijam {

enum class Outcome : std::uint8_t { Success, Jammed, Inactive };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::Jammed: return "jammed";
    default: return "inactive";
  }
}

/// Collision avoidance on a channel multiple pairs hopped to: either everyone
/// gives up (all-hopping) or one uniformly random pair wins (random protocol).
enum class CollisionProtocol { AllHopping, Random };

inline const char* to_string(CollisionProtocol p) {
  return p == CollisionProtocol::AllHopping ? "all-hopping" : "random";
}

/// One S-R pair.  streak > 0 marks the channel's occupant (its last slot was
/// a success and it stayed); streak == 0 marks a newcomer that hopped in.
struct UserAgent {
  int id = 0;
  int channel = 0;
  int streak = 0;
  Outcome last_outcome = Outcome::Inactive;
  StayingPolicy policy;
};

/// Full network state stepped one slot at a time.
struct World {
  NetworkConfig config;
  CollisionProtocol protocol = CollisionProtocol::AllHopping;
  JammerStrategy jammer;
  JammerState jammer_state;
  std::vector<UserAgent> agents;
  std::mt19937_64 rng;
  long long slot = 0;
  double detection_error_prob = 0.0;  // each hit is missed with this odds; 0 in all shipped experiments
};

/// World with all agents placed as newcomers on uniformly random channels and
/// a fresh jammer (sweep patterns drawn from rng).
World make_world(const NetworkConfig& config, const StayingPolicy& policy,
                 const JammerStrategy& jammer, CollisionProtocol protocol,
                 std::mt19937_64 rng);

/// Phases 1-4 of a slot: sensing, collision avoidance, communication with
/// jamming, and jamming detection.  Every agent receives an outcome; the
/// jammer advances (and may react to a detection).
struct SlotOutcomes {
  std::vector<Outcome> outcome;  // by agent id
  std::vector<int> scan;
  bool detected = false;
};
SlotOutcomes resolve_slot(World& world);

/// Phase 5: apply per-agent actions.  Stay is only legal after a success;
/// hopping draws a fresh uniform channel for the next slot.
void apply_actions(World& world, const SlotOutcomes& outcomes,
                   const std::vector<Action>& actions);

/// One full slot with each agent acting on its own staying policy.
struct SlotEvent {
  UserState state;  // MDP state reached this slot
  Action action;
  int channel = 0;
  bool newcomer = false;  // hopped in at the start of this slot
  SlotEvent() : state(UserState::jammed()) {}
};
struct SlotRecord {
  std::vector<SlotEvent> events;  // by agent id
  std::vector<int> scan;
  bool detected = false;
};
SlotRecord step_slot(World& world);

/// Measurement summary of a simulated run.  Streaks are bucketed at
/// 4*T for the visit counts (only reachable under near-minimal hopping).
struct SimMetrics {
  double edsr_estimate = 0.0;
  double edsr_stderr = 0.0;
  double theta_hat = 0.0;
  std::pair<double, double> theta_ci{0.0, 0.0};
  std::map<std::pair<UserState, Action>, long long> visits;
  long long slots = 0;
  std::uint64_t seed = 0;
};

/// Smallest horizon whose tail truncation error is below 1e-4:
/// gamma^horizon * max(R, L+C) / (1-gamma) < 1e-4.
long default_horizon(const RewardParams& rewards);
long default_warmup(const NetworkConfig& config);

/// Empirical EDSR: per episode, a fresh network is warmed up for `warmup`
/// slots, one user is tagged at its next hop, and its discounted rewards are
/// summed over `horizon` slots from the landing on.  Episodes use independent
/// substreams of `seed` and run in parallel.  theta_hat is the fraction of
/// hop landings (all users, measurement window) that were denied the channel.
SimMetrics run_episodes(const NetworkConfig& config, const RewardParams& rewards,
                        const StayingPolicy& policy, const JammerStrategy& jammer,
                        CollisionProtocol protocol, long episodes, long horizon,
                        long warmup, std::uint64_t seed);

/// Steady-state estimate of the inactive probability: simulate until the 95%
/// Wilson interval over hop landings has half-width <= target_halfwidth.
/// Fails after 1e8 landings.
std::pair<double, std::pair<double, double>> estimate_theta(
    const NetworkConfig& config, const StayingPolicy& policy,
    const JammerStrategy& jammer, CollisionProtocol protocol,
    double target_halfwidth, std::uint64_t seed);

/// Per-slot event log: one CSV row per (slot, user) plus the scan set, fixed
/// header `slot,user,channel,outcome,action,scan`.
void write_trace(World& world, long slots, std::ostream& out);

}  // namespace antijam
