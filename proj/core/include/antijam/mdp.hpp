#pragma once

#include <optional>
#include <vector>

#include "antijam/types.hpp"

namespace antijam {

/// Dense index layout for the per-user state set {J, I, 1..max_streak}.
/// Index 0 is J; index 1 is I when present; streaks follow in order.
/// I exists only in multi-user models (a collision needs a second pair).
struct StateSpace {
  int max_streak = 0;         // K_m
  bool with_inactive = false;

  int size() const { return max_streak + (with_inactive ? 2 : 1); }
  int jammed() const { return 0; }
  int inactive() const { return 1; }  // valid only if with_inactive
  int streak(int k) const { return (with_inactive ? 1 : 0) + k; }

  bool is_streak(int id) const { return id >= streak(1); }
  int streak_length(int id) const { return id - streak(1) + 1; }

  UserState state_of(int id) const {
    if (id == jammed()) return UserState::jammed();
    if (with_inactive && id == inactive()) return UserState::inactive();
    return UserState::streak(streak_length(id));
  }
  int index_of(UserState s) const {
    if (s.is_jammed()) return jammed();
    if (s.is_inactive()) {
      if (!with_inactive) throw std::logic_error("state I not in this model");
      return inactive();
    }
    return streak(s.streak_length());
  }

  friend bool operator==(const StateSpace&, const StateSpace&) = default;
};

/// Per-user MDP for one jamming environment.  The hop row is shared by every
/// source state; a stay row exists per streak.  `truncated` marks models whose
/// streak space was cut off with a self-loop at max_streak (jammers that never
/// force a hop); see the README for the truncation error bound.
struct MdpModel {
  NetworkConfig config;
  RewardParams rewards;
  StateSpace space;
  double inactive_prob = 0.0;  // theta
  bool truncated = false;

  std::vector<double> hop_row;                 // size space.size()
  std::vector<std::vector<double>> stay_rows;  // stay_rows[k-1] for streak k

  const std::vector<double>& stay_row(int k) const { return stay_rows[k - 1]; }
  double slot_reward(int state_id, Action a) const {
    return reward(space.state_of(state_id), a, rewards);
  }

  /// Checks row normalization (1 within 1e-12) and shape; throws on violation.
  void validate() const;
};

/// Exact kernel under sweep jamming (basic sweep; also reactive sweep when
/// n = 1) at inactive probability theta.  Hopping lands in I with probability
/// theta, in J with (1-theta)*m/M, else starts a fresh streak.  Staying at
/// streak k is jammed with probability m/(M - k*m); a streak of T-1 cannot be
/// extended.  theta must be 0 when n = 1.
MdpModel sweep_kernel(const NetworkConfig& config, const RewardParams& rewards,
                      double inactive_prob);

/// Kernel under G-memory jamming (uniform scans avoiding the last `memory`
/// scan sets).  Streak rows up to memory+1 are exact: during a stay of
/// k <= memory slots the jammer has covered k*m distinct channels, so the jam
/// hazard is m/(M - k*m), exactly the sweep hazard.  Deeper rows use the
/// stationary window rate m/(M - memory*m); they are exact for memory = 0 and
/// approximate otherwise.  Streaks are unbounded, so the space is truncated
/// at 4*T with a self-loop terminal row.  memory = T-1 reduces to the sweep
/// kernel.
MdpModel gmemory_kernel(const NetworkConfig& config, const RewardParams& rewards,
                        double inactive_prob, int memory);

/// Solved action-value and value tables.  q_hop is indexed by state id;
/// q_stay by streak (index k-1).  v[id] = max over allowed actions of Q.
struct ValueTable {
  StateSpace space;
  std::vector<double> v;
  std::vector<double> q_hop;
  std::vector<double> q_stay;
  int sweeps = 0;

  double q(int state_id, Action a) const;
};

/// Value iteration to sup-norm Bellman residual < tol (default per the
/// solver contract: 1e-9, cap 1e6 sweeps).  Throws NumericalError if the cap
/// is hit, which for discount < 1 indicates a malformed kernel.
ValueTable value_iteration(const MdpModel& model, double tol = 1e-9);

/// Threshold extraction from an optimal table: the largest streak where
/// staying is at least as good as hopping (ties resolve to stay), 0 when
/// hopping wins everywhere.  Verifies the single-crossing structure of
/// Q(k,stay) - Q(k,hop) and throws NumericalError naming the offending
/// streaks otherwise (a symptom of kernel estimation noise).
StayingPolicy greedy_policy(const ValueTable& table);

/// Exact policy evaluation by direct linear solve of the Bellman expectation
/// system over the states visitable under `policy` (residual < 1e-10).
/// Entries of v/q for unvisitable states are NaN.
ValueTable policy_evaluation(const MdpModel& model, const StayingPolicy& policy);

/// Expected discounted sum of rewards under `policy`, averaged over the
/// starting state of a user that has just hopped: S0 ~ the hop row
/// (theta on I, (1-theta)*m/M on J, rest on streak 1).
double edsr(const MdpModel& model, const StayingPolicy& policy);

}  // namespace antijam
