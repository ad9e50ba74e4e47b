#include "antijam/kernel_estimation.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "antijam/netsim.hpp"
#include "antijam/rng.hpp"

namespace antijam {

namespace {

constexpr long kMinSamples = 10'000;
constexpr long kMinRowVisits = 200;  // threshold extraction is sensitive to tail-row noise

UserState state_from(Outcome o, int streak_before, int streak_cap) {
  switch (o) {
    case Outcome::Success: return UserState::streak(std::min(streak_before + 1, streak_cap));
    case Outcome::Jammed: return UserState::jammed();
    default: return UserState::inactive();
  }
}

}  // namespace

int estimated_max_streak(const JammerStrategy& jammer, const NetworkConfig& config) {
  const int period = config.sweep_period();
  const bool terminating =
      jammer.kind == JammerStrategy::Kind::BasicSweep ||
      (jammer.kind == JammerStrategy::Kind::ReactiveSweep && config.pairs == 1) ||
      (jammer.kind == JammerStrategy::Kind::GMemory && jammer.memory == period - 1);
  return terminating ? period - 1 : 4 * period;
}

MdpModel empirical_kernel(const NetworkConfig& config, const RewardParams& rewards,
                          const JammerStrategy& jammer, const StayingPolicy& context,
                          CollisionProtocol protocol, long samples,
                          std::uint64_t seed) {
  config.validate();
  jammer.validate(config);
  if (samples < kMinSamples)
    throw ConfigError("samples: need >= " + std::to_string(kMinSamples));

  const int max_streak = estimated_max_streak(jammer, config);
  const StateSpace space{max_streak, config.pairs >= 2};
  const int n_states = space.size();

  // counts[source][action][next]; stay is only counted for streak sources.
  std::vector<std::vector<long long>> hop_counts(n_states,
                                                 std::vector<long long>(n_states, 0));
  std::vector<std::vector<long long>> stay_counts(max_streak + 1,
                                                  std::vector<long long>(n_states, 0));
  std::vector<long long> hop_visits(n_states, 0), stay_visits(max_streak + 1, 0);

  World world = make_world(config, context, jammer, protocol, substream(seed, 0));
  for (long t = default_warmup(config); t > 0; --t) step_slot(world);

  // The probe (agent 0) steers toward the least-visited (streak, action)
  // pair: climb with Stay below the target streak, take the target action on
  // it, hop back down when overshooting.  Jam/inactive force a hop and count
  // toward the hop rows.
  const auto pick_target = [&]() {
    int best_k = 1;
    Action best_a = Action::Stay;
    long long best = std::numeric_limits<long long>::max();
    for (int k = 1; k <= max_streak; ++k) {
      if (stay_visits[k] < best) { best = stay_visits[k]; best_k = k; best_a = Action::Stay; }
      if (hop_visits[space.streak(k)] < best) {
        best = hop_visits[space.streak(k)];
        best_k = k;
        best_a = Action::Hop;
      }
    }
    return std::pair<int, Action>(best_k, best_a);
  };

  auto target = pick_target();
  bool have_prev = false;
  int prev_state = 0;
  Action prev_action = Action::Hop;
  long recorded = 0;

  while (recorded < samples) {
    const int probe_streak = world.agents[0].streak;
    SlotOutcomes outcomes = resolve_slot(world);
    const UserState probe_state = state_from(outcomes.outcome[0], probe_streak, max_streak);
    const int probe_id = space.index_of(probe_state);

    if (have_prev) {
      if (prev_action == Action::Hop) {
        ++hop_visits[prev_state];
        ++hop_counts[prev_state][probe_id];
      } else {
        const int k = space.streak_length(prev_state);
        ++stay_visits[k];
        ++stay_counts[k][probe_id];
      }
      ++recorded;
      if (prev_action == target.second && space.is_streak(prev_state) &&
          space.streak_length(prev_state) == target.first)
        target = pick_target();
    }

    std::vector<Action> actions(config.pairs);
    if (probe_state.is_streak()) {
      const int k = probe_state.streak_length();
      if (k < target.first)
        actions[0] = Action::Stay;
      else if (k == target.first)
        actions[0] = target.second;
      else
        actions[0] = Action::Hop;
    } else {
      actions[0] = Action::Hop;
    }
    for (int i = 1; i < config.pairs; ++i) {
      const UserState s = state_from(outcomes.outcome[i], world.agents[i].streak, max_streak);
      actions[i] = context.act(s);
    }

    prev_state = probe_id;
    prev_action = actions[0];
    have_prev = true;
    apply_actions(world, outcomes, actions);
  }

  // Coverage per (state, action) pair, then rows from normalized counts.
  for (int id = 0; id < n_states; ++id) {
    if (hop_visits[id] < kMinRowVisits)
      throw NumericalError("empirical kernel: pair (" + space.state_of(id).label() +
                           ", hop) starved: " + std::to_string(hop_visits[id]) +
                           " visits < " + std::to_string(kMinRowVisits) +
                           " within the sample budget");
  }
  for (int k = 1; k <= max_streak; ++k) {
    if (stay_visits[k] < kMinRowVisits)
      throw NumericalError("empirical kernel: pair (" + std::to_string(k) +
                           ", stay) starved: " + std::to_string(stay_visits[k]) +
                           " visits < " + std::to_string(kMinRowVisits) +
                           " within the sample budget");
  }

  MdpModel m;
  m.config = config;
  m.rewards = rewards;
  m.space = space;
  m.truncated = max_streak > config.sweep_period() - 1;
  m.hop_row.assign(n_states, 0.0);
  long long hop_total = 0;
  std::vector<long long> pooled(n_states, 0);
  for (int id = 0; id < n_states; ++id)
    for (int j = 0; j < n_states; ++j) {
      pooled[j] += hop_counts[id][j];
      hop_total += hop_counts[id][j];
    }
  for (int j = 0; j < n_states; ++j)
    m.hop_row[j] = static_cast<double>(pooled[j]) / static_cast<double>(hop_total);
  m.inactive_prob = space.with_inactive ? m.hop_row[space.inactive()] : 0.0;

  m.stay_rows.assign(max_streak, std::vector<double>(n_states, 0.0));
  for (int k = 1; k <= max_streak; ++k)
    for (int j = 0; j < n_states; ++j)
      m.stay_rows[k - 1][j] =
          static_cast<double>(stay_counts[k][j]) / static_cast<double>(stay_visits[k]);

  m.validate();
  return m;
}

}  // namespace antijam
