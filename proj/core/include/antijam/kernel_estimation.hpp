#pragma once

#include <cstdint>

#include "antijam/jammers.hpp"
#include "antijam/mdp.hpp"
#include "antijam/netsim.hpp"

namespace antijam {

/// Largest streak the estimated state space carries for a jammer: T-1 when
/// streaks terminate structurally (sweeps; reactive sweep with a single user;
/// full-memory jamming), otherwise truncated at 4*T.
int estimated_max_streak(const JammerStrategy& jammer, const NetworkConfig& config);

/// Monte Carlo estimate of the per-user transition kernel under `jammer`.
/// One probe user visits every (state, action) pair by repeatedly climbing to
/// the currently least-visited pair while the other n-1 users run `context`
/// under `protocol` (together they set the inactive probability the probe
/// experiences).  `samples` is the number of recorded probe transitions
/// (>= 1e4).  Hop rows are pooled across source states, which the true kernel
/// shares.  Fails naming the starved pair if any (state, action) pair
/// collected fewer than 200 visits.
MdpModel empirical_kernel(const NetworkConfig& config, const RewardParams& rewards,
                          const JammerStrategy& jammer, const StayingPolicy& context,
                          CollisionProtocol protocol, long samples,
                          std::uint64_t seed);

}  // namespace antijam
