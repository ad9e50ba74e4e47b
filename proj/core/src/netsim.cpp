#include "antijam/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <thread>

#include "antijam/rng.hpp"
#include "antijam/stats.hpp"

namespace antijam {

namespace {

constexpr double kHorizonTailTol = 1e-4;
constexpr long long kThetaEventCap = 100'000'000;
constexpr long kTagWaitCap = 200'000;  // slots to wait for the tagged user's hop

/// Runs fn(i) for i in [0, count) across threads; fn must only write state
/// owned by index i, so the result is independent of the thread count.
template <typename Fn>
void parallel_for(long count, Fn&& fn) {
  unsigned workers = std::thread::hardware_concurrency();
  if (workers <= 1 || count < 4) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (long i = w; i < count; i += workers) fn(i);
    }));
  }
  for (auto& f : futures) f.get();
}

int uniform_channel(const NetworkConfig& config, std::mt19937_64& rng) {
  return std::uniform_int_distribution<int>(0, config.channels - 1)(rng);
}

}  // namespace

World make_world(const NetworkConfig& config, const StayingPolicy& policy,
                 const JammerStrategy& jammer, CollisionProtocol protocol,
                 std::mt19937_64 rng) {
  config.validate();
  World w;
  w.config = config;
  w.protocol = protocol;
  w.jammer = jammer;
  w.rng = std::move(rng);
  w.jammer_state = make_jammer_state(jammer, config, w.rng);
  w.agents.resize(config.pairs);
  for (int i = 0; i < config.pairs; ++i) {
    w.agents[i].id = i;
    w.agents[i].policy = policy;
    w.agents[i].channel = uniform_channel(config, w.rng);
    w.agents[i].streak = 0;
    w.agents[i].last_outcome = Outcome::Inactive;
  }
  return w;
}

SlotOutcomes resolve_slot(World& world) {
  const int n = world.config.pairs;
  const int channels = world.config.channels;

  SlotOutcomes out;
  out.outcome.assign(n, Outcome::Inactive);

  // Sensing: the occupant (if any) keeps its channel.
  std::vector<int> occupant(channels, -1);
  for (const UserAgent& a : world.agents) {
    if (a.streak <= 0) continue;
    if (occupant[a.channel] != -1)
      throw std::logic_error("slot " + std::to_string(world.slot) + ": channel " +
                             std::to_string(a.channel) + " has two occupants (agents " +
                             std::to_string(occupant[a.channel]) + ", " +
                             std::to_string(a.id) + ")");
    occupant[a.channel] = a.id;
  }
  std::vector<std::vector<int>> newcomers(channels);
  for (const UserAgent& a : world.agents)
    if (a.streak == 0) newcomers[a.channel].push_back(a.id);

  // Collision avoidance on unoccupied channels; one communicator per channel.
  std::vector<int> communicator;  // agent ids
  for (int c = 0; c < channels; ++c) {
    if (occupant[c] != -1) {
      communicator.push_back(occupant[c]);
      continue;  // newcomers on an occupied channel stay inactive
    }
    const auto& arrivals = newcomers[c];
    if (arrivals.empty()) continue;
    if (arrivals.size() == 1) {
      communicator.push_back(arrivals[0]);
    } else if (world.protocol == CollisionProtocol::Random) {
      std::uniform_int_distribution<std::size_t> pick(0, arrivals.size() - 1);
      communicator.push_back(arrivals[pick(world.rng)]);
    }
    // all-hopping: two or more pilot signals and everyone gives up
  }

  // Communication phase: the jammer hits every communicator on a scanned channel.
  out.scan = next_scan(world.jammer, world.jammer_state, world.config, world.rng);
  std::vector<char> scanned(channels, 0);
  for (int c : out.scan) scanned[c] = 1;

  int hits = 0;
  for (int id : communicator) {
    UserAgent& a = world.agents[id];
    if (scanned[a.channel]) {
      out.outcome[id] = Outcome::Jammed;
      ++hits;
    } else {
      out.outcome[id] = Outcome::Success;
    }
  }

  // Detection phase; the reactive jammer resets from the next slot on.
  out.detected = hits > 0;
  if (out.detected && world.detection_error_prob > 0.0) {
    std::bernoulli_distribution miss(world.detection_error_prob);
    int seen = 0;
    for (int i = 0; i < hits; ++i)
      if (!miss(world.rng)) ++seen;
    out.detected = seen > 0;
  }
  if (out.detected)
    on_detection(world.jammer, world.jammer_state, world.config, world.rng);

  ++world.slot;
  return out;
}

void apply_actions(World& world, const SlotOutcomes& outcomes,
                   const std::vector<Action>& actions) {
  for (UserAgent& a : world.agents) {
    const Outcome o = outcomes.outcome[a.id];
    const Action act = actions[a.id];
    if (act == Action::Stay) {
      if (o != Outcome::Success)
        throw std::logic_error("agent " + std::to_string(a.id) +
                               " tried to stay after a non-success slot");
      ++a.streak;
    } else {
      a.streak = 0;
      a.channel = uniform_channel(world.config, world.rng);
    }
    a.last_outcome = o;
  }
}

SlotRecord step_slot(World& world) {
  SlotRecord rec;
  rec.events.resize(world.config.pairs);
  for (const UserAgent& a : world.agents) {
    rec.events[a.id].newcomer = a.streak == 0;
    rec.events[a.id].channel = a.channel;
  }

  SlotOutcomes outcomes = resolve_slot(world);
  std::vector<Action> actions(world.config.pairs);
  for (const UserAgent& a : world.agents) {
    UserState s = UserState::jammed();
    switch (outcomes.outcome[a.id]) {
      case Outcome::Success: s = UserState::streak(a.streak + 1); break;
      case Outcome::Jammed: s = UserState::jammed(); break;
      case Outcome::Inactive: s = UserState::inactive(); break;
    }
    actions[a.id] = a.policy.act(s);
    rec.events[a.id].state = s;
    rec.events[a.id].action = actions[a.id];
  }
  apply_actions(world, outcomes, actions);

  rec.scan = std::move(outcomes.scan);
  rec.detected = outcomes.detected;
  return rec;
}

long default_horizon(const RewardParams& rewards) {
  const double span = std::max(rewards.success_reward,
                               rewards.jam_loss + rewards.hop_cost);
  const double target = kHorizonTailTol * (1.0 - rewards.discount) / span;
  return static_cast<long>(std::ceil(std::log(target) / std::log(rewards.discount))) + 1;
}

long default_warmup(const NetworkConfig& config) {
  return 20L * config.sweep_period() + 100;
}

namespace {

struct EpisodeResult {
  double discounted_sum = 0.0;
  long long landings = 0;
  long long inactive_landings = 0;
  // visits flattened: [state bucket][action]; buckets: 0=J, 1=I, 2+k-1=streak k
  std::vector<long long> visits;
};

int visit_bucket(const UserState& s, int streak_cap) {
  if (s.is_jammed()) return 0;
  if (s.is_inactive()) return 1;
  return 1 + std::min(s.streak_length(), streak_cap);
}

}  // namespace

SimMetrics run_episodes(const NetworkConfig& config, const RewardParams& rewards,
                        const StayingPolicy& policy, const JammerStrategy& jammer,
                        CollisionProtocol protocol, long episodes, long horizon,
                        long warmup, std::uint64_t seed) {
  config.validate();
  jammer.validate(config);
  if (episodes < 1) throw ConfigError("sim.episodes: must be >= 1");
  if (warmup < 0) throw ConfigError("sim.warmup: must be >= 0");
  const double tail = std::pow(rewards.discount, static_cast<double>(horizon)) *
                      std::max(rewards.success_reward, rewards.jam_loss + rewards.hop_cost) /
                      (1.0 - rewards.discount);
  if (!(tail < kHorizonTailTol))
    throw ConfigError("sim.horizon: too short, discounted tail " + std::to_string(tail) +
                      " >= " + std::to_string(kHorizonTailTol) +
                      " (need >= " + std::to_string(default_horizon(rewards)) + ")");

  const int streak_cap = 4 * config.sweep_period();
  const int buckets = 2 + streak_cap;
  std::vector<EpisodeResult> results(episodes);

  parallel_for(episodes, [&](long e) {
    EpisodeResult& res = results[e];
    res.visits.assign(buckets * 2, 0);
    World world = make_world(config, policy, jammer, protocol,
                             substream(seed, static_cast<std::uint64_t>(e)));
    for (long t = 0; t < warmup; ++t) step_slot(world);

    // Tag user 0 at its next hop; its landing slot is t = 0.
    long waited = 0;
    for (;; ++waited) {
      if (waited > kTagWaitCap)
        throw NumericalError("run_episodes: tagged user never hopped within " +
                             std::to_string(kTagWaitCap) + " slots");
      SlotRecord rec = step_slot(world);
      if (rec.events[0].action == Action::Hop) break;
    }

    double discount_t = 1.0;
    for (long t = 0; t < horizon; ++t) {
      SlotRecord rec = step_slot(world);
      const SlotEvent& tagged = rec.events[0];
      res.discounted_sum += discount_t * reward(tagged.state, tagged.action, rewards);
      discount_t *= rewards.discount;
      for (const SlotEvent& ev : rec.events) {
        res.visits[visit_bucket(ev.state, streak_cap) * 2 +
                   (ev.action == Action::Stay ? 0 : 1)]++;
        if (ev.newcomer) {
          ++res.landings;
          if (ev.state.is_inactive()) ++res.inactive_landings;
        }
      }
    }
  });

  SimMetrics metrics;
  metrics.seed = seed;
  metrics.slots = episodes * horizon;

  std::vector<double> sums(episodes);
  long long landings = 0, inactive = 0;
  std::vector<long long> visits(buckets * 2, 0);
  for (long e = 0; e < episodes; ++e) {
    sums[e] = results[e].discounted_sum;
    landings += results[e].landings;
    inactive += results[e].inactive_landings;
    for (int b = 0; b < buckets * 2; ++b) visits[b] += results[e].visits[b];
  }
  const MeanStderr ms = mean_stderr(sums);
  metrics.edsr_estimate = ms.mean;
  metrics.edsr_stderr = ms.stderr_;
  metrics.theta_hat = landings > 0 ? static_cast<double>(inactive) / landings : 0.0;
  metrics.theta_ci = wilson_interval(inactive, landings);
  for (int b = 0; b < buckets; ++b) {
    UserState s = b == 0   ? UserState::jammed()
                  : b == 1 ? UserState::inactive()
                           : UserState::streak(b - 1);
    if (visits[b * 2] > 0) metrics.visits[{s, Action::Stay}] = visits[b * 2];
    if (visits[b * 2 + 1] > 0) metrics.visits[{s, Action::Hop}] = visits[b * 2 + 1];
  }
  return metrics;
}

std::pair<double, std::pair<double, double>> estimate_theta(
    const NetworkConfig& config, const StayingPolicy& policy,
    const JammerStrategy& jammer, CollisionProtocol protocol,
    double target_halfwidth, std::uint64_t seed) {
  config.validate();
  jammer.validate(config);
  if (!(target_halfwidth > 0))
    throw ConfigError("sim.theta_halfwidth: must be > 0");

  World world = make_world(config, policy, jammer, protocol, substream(seed, 0));
  for (long t = default_warmup(config); t > 0; --t) step_slot(world);

  long long landings = 0, inactive = 0;
  long long next_check = 512;
  for (;;) {
    SlotRecord rec = step_slot(world);
    for (const SlotEvent& ev : rec.events) {
      if (!ev.newcomer) continue;
      ++landings;
      if (ev.state.is_inactive()) ++inactive;
    }
    if (landings < next_check) continue;
    next_check = landings + std::max<long long>(512, landings / 8);
    const auto ci = wilson_interval(inactive, landings);
    if ((ci.second - ci.first) / 2.0 <= target_halfwidth)
      return {static_cast<double>(inactive) / landings, ci};
    if (landings > kThetaEventCap)
      throw NumericalError("estimate_theta: event cap exceeded before reaching the "
                           "requested interval half-width");
  }
}

void write_trace(World& world, long slots, std::ostream& out) {
  out << "slot,user,channel,outcome,action,scan\n";
  for (long t = 0; t < slots; ++t) {
    const long long slot = world.slot;
    SlotRecord rec = step_slot(world);
    std::string scan;
    for (std::size_t i = 0; i < rec.scan.size(); ++i) {
      if (i) scan += ';';
      scan += std::to_string(rec.scan[i]);
    }
    for (std::size_t u = 0; u < rec.events.size(); ++u) {
      const SlotEvent& ev = rec.events[u];
      const char* outcome = ev.state.is_streak()   ? "success"
                            : ev.state.is_jammed() ? "jammed"
                                                   : "inactive";
      out << slot << ',' << u << ',' << ev.channel << ',' << outcome << ','
          << to_string(ev.action) << ',' << scan << '\n';
    }
  }
}

}  // namespace antijam
