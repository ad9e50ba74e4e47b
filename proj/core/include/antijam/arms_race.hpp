#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "antijam/jammers.hpp"
#include "antijam/mdp.hpp"
#include "antijam/netsim.hpp"

namespace antijam {

/// Simulation budgets shared by the arms-race drivers.  Zero horizon/warmup
/// pick the defaults from netsim.  theta_halfwidth doubles as the
/// quantization grid applied to theta estimates before the best-response map,
/// so Monte Carlo noise below the grid cannot flip a threshold.
struct SimOptions {
  long episodes = 4000;
  long horizon = 0;
  long warmup = 0;
  double theta_halfwidth = 0.002;
};

/// f: optimal staying threshold for the sweep environment at inactive
/// probability theta (value iteration + greedy extraction).
StayingPolicy best_response_f(double theta, const NetworkConfig& config,
                              const RewardParams& rewards);

/// g: inactive probability induced when all n users run `policy` against
/// `jammer` under `protocol`; 0 for a single user.  Deterministic in
/// (arguments, seed).
double inactive_g(const StayingPolicy& policy, const NetworkConfig& config,
                  const JammerStrategy& jammer, CollisionProtocol protocol,
                  double target_halfwidth, std::uint64_t seed);

/// Model that agrees with `jammer`'s true kernel on every state-action pair
/// visitable under `policy`:
///   - basic sweep (and G-memory with G = T-1): the sweep kernel, any policy;
///   - reactive sweep: the sweep kernel for n = 1 (a lone user's streak runs
///     between its own detections, which reset nothing it can see);
///   - G-memory: the memory kernel, exact while the policy never stays past
///     streak G+1 (or G = 0, exact everywhere).
/// Throws NumericalError when no exact construction exists.
MdpModel analytic_kernel(const NetworkConfig& config, const RewardParams& rewards,
                         double theta, const JammerStrategy& jammer,
                         const StayingPolicy& policy);

/// Alternating best responses theta <- g(pi), pi <- f(theta) from an initial
/// threshold, against the basic sweep jammer.
struct FixedPointResult {
  StayingPolicy policy;  // K*
  double theta_star = 0.0;
  int iterations = 0;  // policy updates applied before the threshold repeated
  std::vector<std::pair<int, double>> trajectory;  // (K_j, theta_j)
  bool converged = false;
  bool cycle_resolved = false;  // 2-cycle collapsed by the EDSR comparison
};

/// Stops when the threshold repeats; theta estimates are quantized to the
/// theta_halfwidth grid first.  A {K, K+1} 2-cycle is re-estimated at 4x
/// precision and, if it persists, resolved toward the higher simulated EDSR.
/// Gives up (converged = false) after 4*(T-1) updates.
FixedPointResult fixed_point(int initial_threshold, const NetworkConfig& config,
                             const RewardParams& rewards, const JammerStrategy& jammer,
                             CollisionProtocol protocol, std::uint64_t seed,
                             const SimOptions& opts = {});

/// One stage of the arms race.
struct ArmsRaceRound {
  enum class Source { Analytic, Simulated };
  int round = 0;
  JammerStrategy jammer;
  StayingPolicy policy;
  double theta = 0.0;
  double edsr = 0.0;
  double edsr_stderr = 0.0;
  Source source = Source::Analytic;
};

/// The canonical four rounds: random jamming vs minimal hopping, sweep vs
/// minimal hopping, sweep vs the fixed-point K*-staying policy, and K*-memory
/// jamming vs the same policy.  EDSRs are analytic for n = 1 (theta = 0 and
/// every round has a closed-form kernel) and simulated otherwise.
std::vector<ArmsRaceRound> arms_race(const NetworkConfig& config,
                                     const RewardParams& rewards,
                                     CollisionProtocol protocol, std::uint64_t seed,
                                     const SimOptions& opts = {});

/// Simulated-EDSR sweep over every threshold K in [0:T-1] plus the minimal
/// hopping policy, with common random numbers across candidates (episode e of
/// every candidate uses substream(seed, e)).  Ties go to the smaller K.
struct ThresholdSearchResult {
  struct Entry {
    StayingPolicy policy;
    double edsr = 0.0;
    double edsr_stderr = 0.0;
  };
  StayingPolicy best;
  double edsr = 0.0;
  double edsr_stderr = 0.0;
  std::vector<Entry> table;
};
ThresholdSearchResult best_threshold_by_simulation(
    const NetworkConfig& config, const RewardParams& rewards,
    const JammerStrategy& jammer, CollisionProtocol protocol, std::uint64_t seed,
    const SimOptions& opts = {});

}  // namespace antijam
