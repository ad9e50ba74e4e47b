#include "antijam/arms_race.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "antijam/rng.hpp"

namespace antijam {

namespace {

double quantize(double theta, double grid) {
  return std::clamp(std::round(theta / grid) * grid, 0.0, 1.0);
}

long horizon_of(const SimOptions& opts, const RewardParams& rewards) {
  return opts.horizon > 0 ? opts.horizon : default_horizon(rewards);
}
long warmup_of(const SimOptions& opts, const NetworkConfig& config) {
  return opts.warmup > 0 ? opts.warmup : default_warmup(config);
}

}  // namespace

StayingPolicy best_response_f(double theta, const NetworkConfig& config,
                              const RewardParams& rewards) {
  return greedy_policy(value_iteration(sweep_kernel(config, rewards, theta)));
}

double inactive_g(const StayingPolicy& policy, const NetworkConfig& config,
                  const JammerStrategy& jammer, CollisionProtocol protocol,
                  double target_halfwidth, std::uint64_t seed) {
  if (config.pairs == 1) return 0.0;
  return estimate_theta(config, policy, jammer, protocol, target_halfwidth, seed)
      .first;
}

MdpModel analytic_kernel(const NetworkConfig& config, const RewardParams& rewards,
                         double theta, const JammerStrategy& jammer,
                         const StayingPolicy& policy) {
  switch (jammer.kind) {
    case JammerStrategy::Kind::BasicSweep:
      return sweep_kernel(config, rewards, theta);
    case JammerStrategy::Kind::ReactiveSweep:
      if (config.pairs == 1) return sweep_kernel(config, rewards, theta);
      throw NumericalError(
          "analytic kernel: reactive sweep has no closed form with n >= 2 "
          "(other users' detections reshuffle the pattern)");
    case JammerStrategy::Kind::GMemory:
      break;
  }
  const int memory = jammer.memory;
  if (memory == config.sweep_period() - 1)
    return sweep_kernel(config, rewards, theta);
  const bool exact_rows =
      memory == 0 ||
      (!policy.is_minimal_hopping() && policy.threshold <= memory + 1);
  if (!exact_rows)
    throw NumericalError("analytic kernel: " + jammer.label() +
                         " rows past streak " + std::to_string(memory + 1) +
                         " have no closed form, but policy " + policy.label() +
                         " stays that deep");
  return gmemory_kernel(config, rewards, theta, memory);
}

FixedPointResult fixed_point(int initial_threshold, const NetworkConfig& config,
                             const RewardParams& rewards, const JammerStrategy& jammer,
                             CollisionProtocol protocol, std::uint64_t seed,
                             const SimOptions& opts) {
  config.validate();
  rewards.validate();
  if (jammer.kind != JammerStrategy::Kind::BasicSweep)
    throw ConfigError("fixed_point: requires the basic sweep jammer (the only "
                      "environment with a closed-form best response)");
  const int period = config.sweep_period();
  if (initial_threshold < 0 || initial_threshold > period - 1)
    throw ConfigError("policy: initial threshold must lie in [0:T-1]");

  // theta estimates keyed by (threshold, precision level); the seed is
  // derived from both so re-evaluating a threshold reproduces its estimate.
  std::map<std::pair<int, int>, double> theta_cache;
  const auto g_at = [&](int k, int level) {
    const auto key = std::make_pair(k, level);
    auto it = theta_cache.find(key);
    if (it != theta_cache.end()) return it->second;
    const double halfwidth = opts.theta_halfwidth / (level == 0 ? 1.0 : 4.0);
    const double th =
        inactive_g(StayingPolicy{k}, config, jammer, protocol, halfwidth,
                   mix64(seed ^ mix64(static_cast<std::uint64_t>(k) * 8 + level)));
    theta_cache[key] = th;
    return th;
  };
  const auto f_at = [&](double theta, int level) {
    const double grid = opts.theta_halfwidth / (level == 0 ? 1.0 : 4.0);
    return best_response_f(quantize(theta, grid), config, rewards).threshold;
  };

  FixedPointResult res;
  int prev = -1;
  int cur = initial_threshold;
  const int max_updates = 4 * (period - 1);
  for (int pass = 1; pass <= max_updates; ++pass) {
    const double theta = g_at(cur, 0);
    res.trajectory.emplace_back(cur, theta);
    const int next = f_at(theta, 0);
    if (next == cur) {
      res.policy = StayingPolicy{cur};
      res.theta_star = theta;
      res.iterations = pass - 1;
      res.converged = true;
      return res;
    }
    if (next == prev) {
      // 2-cycle {prev, cur}: re-estimate both at 4x precision.
      const double theta_a = g_at(next, 1), theta_b = g_at(cur, 1);
      const int f_a = f_at(theta_a, 1), f_b = f_at(theta_b, 1);
      if (f_a == next || f_b == cur) {
        const int k = f_a == next ? next : cur;
        res.policy = StayingPolicy{k};
        res.theta_star = f_a == next ? theta_a : theta_b;
        res.iterations = pass;
        res.trajectory.emplace_back(k, res.theta_star);
        res.converged = true;
        return res;
      }
      if (f_a == cur && f_b == next) {
        // Persistent cycle: keep the threshold with the higher simulated EDSR.
        const long horizon = horizon_of(opts, rewards);
        const long warmup = warmup_of(opts, config);
        const double edsr_a =
            run_episodes(config, rewards, StayingPolicy{next}, jammer, protocol,
                         opts.episodes, horizon, warmup, mix64(seed ^ 0xc1c1eULL))
                .edsr_estimate;
        const double edsr_b =
            run_episodes(config, rewards, StayingPolicy{cur}, jammer, protocol,
                         opts.episodes, horizon, warmup, mix64(seed ^ 0xc1c1eULL))
                .edsr_estimate;
        const int k = edsr_a >= edsr_b ? next : cur;
        res.policy = StayingPolicy{k};
        res.theta_star = edsr_a >= edsr_b ? theta_a : theta_b;
        res.iterations = pass;
        res.trajectory.emplace_back(k, res.theta_star);
        res.converged = true;
        res.cycle_resolved = true;
        return res;
      }
      // Refinement moved the map elsewhere; fall through with the new value.
    }
    prev = cur;
    cur = next;
  }
  res.policy = StayingPolicy{cur};
  res.theta_star = res.trajectory.empty() ? 0.0 : res.trajectory.back().second;
  res.iterations = max_updates;
  res.converged = false;
  return res;
}

std::vector<ArmsRaceRound> arms_race(const NetworkConfig& config,
                                     const RewardParams& rewards,
                                     CollisionProtocol protocol, std::uint64_t seed,
                                     const SimOptions& opts) {
  config.validate();
  rewards.validate();
  const bool analytic = config.pairs == 1;
  const long horizon = horizon_of(opts, rewards);
  const long warmup = warmup_of(opts, config);

  const FixedPointResult fp =
      fixed_point(0, config, rewards, JammerStrategy::basic_sweep(), protocol,
                  mix64(seed ^ 0xf1defULL), opts);
  if (!fp.converged)
    throw NumericalError("arms_race: fixed-point iteration did not converge");
  const StayingPolicy k_star = fp.policy;

  struct Stage {
    JammerStrategy jammer;
    StayingPolicy policy;
  };
  const Stage stages[4] = {
      {JammerStrategy::random_jamming(), StayingPolicy::minimal_hopping()},
      {JammerStrategy::basic_sweep(), StayingPolicy::minimal_hopping()},
      {JammerStrategy::basic_sweep(), k_star},
      {JammerStrategy::gmemory(k_star.threshold), k_star},
  };

  std::vector<ArmsRaceRound> rounds;
  for (int i = 0; i < 4; ++i) {
    ArmsRaceRound r;
    r.round = i + 1;
    r.jammer = stages[i].jammer;
    r.policy = stages[i].policy;
    if (analytic) {
      r.theta = 0.0;
      r.edsr = edsr(analytic_kernel(config, rewards, 0.0, r.jammer, r.policy), r.policy);
      r.source = ArmsRaceRound::Source::Analytic;
    } else {
      r.theta = i == 2 ? fp.theta_star
                       : inactive_g(r.policy, config, r.jammer, protocol,
                                    opts.theta_halfwidth, mix64(seed ^ (0xa0 + i)));
      const SimMetrics m =
          run_episodes(config, rewards, r.policy, r.jammer, protocol, opts.episodes,
                       horizon, warmup, mix64(seed ^ (0xb0 + i)));
      r.edsr = m.edsr_estimate;
      r.edsr_stderr = m.edsr_stderr;
      r.source = ArmsRaceRound::Source::Simulated;
    }
    rounds.push_back(r);
  }
  return rounds;
}

ThresholdSearchResult best_threshold_by_simulation(
    const NetworkConfig& config, const RewardParams& rewards,
    const JammerStrategy& jammer, CollisionProtocol protocol, std::uint64_t seed,
    const SimOptions& opts) {
  config.validate();
  rewards.validate();
  jammer.validate(config);
  const long horizon = horizon_of(opts, rewards);
  const long warmup = warmup_of(opts, config);

  std::vector<StayingPolicy> candidates;
  for (int k = 0; k <= config.sweep_period() - 1; ++k)
    candidates.push_back(StayingPolicy{k});
  candidates.push_back(StayingPolicy::minimal_hopping());

  ThresholdSearchResult res;
  bool first = true;
  for (const StayingPolicy& policy : candidates) {
    // Same master seed for every candidate: episode e reuses substream(seed, e).
    const SimMetrics m = run_episodes(config, rewards, policy, jammer, protocol,
                                      opts.episodes, horizon, warmup, seed);
    res.table.push_back({policy, m.edsr_estimate, m.edsr_stderr});
    if (first || m.edsr_estimate > res.edsr) {
      res.best = policy;
      res.edsr = m.edsr_estimate;
      res.edsr_stderr = m.edsr_stderr;
      first = false;
    }
  }
  return res;
}

}  // namespace antijam
