#pragma once

#include <utility>

#include "antijam/netsim.hpp"
#include "antijam/types.hpp"

namespace antijam {

/// Closed-form bounds on the inactive probability of a user among n pairs on
/// M channels; valid for any hopping policy and any jamming strategy.
struct ThetaBounds {
  double lower = 0.0;
  double upper = 0.0;
  CollisionProtocol protocol = CollisionProtocol::AllHopping;
};

/// All-hopping: lower = 1 - (1 - 1/M)^(n-1) (everyone else hopping), upper =
/// (n-1)/M (everyone else parked on its own channel).  Random protocol: the
/// lower bound discounts each collision size i by the i/(i+1) odds of losing
/// the draw; same upper bound.  The upper bound is clamped to 1 when n-1 > M.
ThetaBounds theta_bounds(CollisionProtocol protocol, int pairs, int channels);

/// Staying-threshold sandwich: best responses to the two theta bounds.
/// K(theta) is non-decreasing, so the optimal threshold for the true theta
/// lies between the two.
std::pair<int, int> kstar_bounds(const NetworkConfig& config,
                                 const RewardParams& rewards,
                                 const ThetaBounds& bounds);

}  // namespace antijam
