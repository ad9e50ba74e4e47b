#include "antijam/analysis.hpp"

#include <cmath>

#include "antijam/arms_race.hpp"

namespace antijam {

namespace {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

ThetaBounds theta_bounds(CollisionProtocol protocol, int pairs, int channels) {
  if (pairs < 1) throw ConfigError("network.n: need at least one S-R pair");
  if (channels < 2) throw ConfigError("network.M: need at least 2 channels");

  ThetaBounds b;
  b.protocol = protocol;
  b.upper = std::min(1.0, static_cast<double>(pairs - 1) / channels);
  if (pairs == 1) return b;

  const double log_miss = std::log1p(-1.0 / channels);  // log(1 - 1/M)
  if (protocol == CollisionProtocol::AllHopping) {
    b.lower = -std::expm1(static_cast<double>(pairs - 1) * log_miss);
    return b;
  }

  // Random protocol: sum_{i=1}^{n-1} i/(i+1) * C(n-1,i) (1/M)^i (1-1/M)^(n-1-i),
  // evaluated in log space so large n does not overflow the binomial.
  const double log_hit = -std::log(static_cast<double>(channels));
  double sum = 0.0;
  for (int i = 1; i <= pairs - 1; ++i) {
    const double log_term = std::log(static_cast<double>(i) / (i + 1.0)) +
                            log_choose(pairs - 1, i) + i * log_hit +
                            (pairs - 1 - i) * log_miss;
    sum += std::exp(log_term);
  }
  b.lower = std::min(sum, b.upper);
  return b;
}

std::pair<int, int> kstar_bounds(const NetworkConfig& config,
                                 const RewardParams& rewards,
                                 const ThetaBounds& bounds) {
  if (!(bounds.lower >= 0.0 && bounds.lower <= bounds.upper && bounds.upper <= 1.0))
    throw ConfigError("theta bounds: need 0 <= lower <= upper <= 1");
  const int lo = best_response_f(bounds.lower, config, rewards).threshold;
  const int hi = best_response_f(bounds.upper, config, rewards).threshold;
  if (lo > hi)
    throw NumericalError("threshold bounds inverted: K(lower) > K(upper)");
  return {lo, hi};
}

}  // namespace antijam
