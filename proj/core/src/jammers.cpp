#include "antijam/jammers.hpp"

#include <algorithm>
#include <numeric>

namespace antijam {

namespace {

std::vector<int> random_pattern(const NetworkConfig& config, std::mt19937_64& rng) {
  std::vector<int> pattern(config.channels);
  std::iota(pattern.begin(), pattern.end(), 0);
  std::shuffle(pattern.begin(), pattern.end(), rng);
  return pattern;
}

std::vector<int> sweep_block(const JammerState& state, const NetworkConfig& config) {
  const int m = config.scan_width;
  std::vector<int> scan(state.pattern.begin() + state.position * m,
                        state.pattern.begin() + (state.position + 1) * m);
  std::sort(scan.begin(), scan.end());
  return scan;
}

}  // namespace

JammerState make_jammer_state(const JammerStrategy& strategy,
                              const NetworkConfig& config, std::mt19937_64& rng) {
  strategy.validate(config);
  JammerState state;
  if (strategy.is_sweep()) state.pattern = random_pattern(config, rng);
  return state;
}

JammerState make_sweep_state(std::vector<int> pattern, const NetworkConfig& config) {
  std::vector<int> sorted = pattern;
  std::sort(sorted.begin(), sorted.end());
  for (int c = 0; c < config.channels; ++c)
    if (sorted[c] != c) throw ConfigError("sweep pattern must be a permutation of the channels");
  JammerState state;
  state.pattern = std::move(pattern);
  return state;
}

std::vector<int> next_scan(const JammerStrategy& strategy, JammerState& state,
                           const NetworkConfig& config, std::mt19937_64& rng) {
  if (strategy.is_sweep()) {
    std::vector<int> scan = sweep_block(state, config);
    state.position = (state.position + 1) % config.sweep_period();
    return scan;
  }

  // G-memory: uniform m-subset of the channels absent from the recent scans.
  std::vector<char> excluded(config.channels, 0);
  for (const auto& past : state.history)
    for (int c : past) excluded[c] = 1;
  std::vector<int> eligible;
  eligible.reserve(config.channels);
  for (int c = 0; c < config.channels; ++c)
    if (!excluded[c]) eligible.push_back(c);

  std::vector<int> scan;
  scan.reserve(config.scan_width);
  std::sample(eligible.begin(), eligible.end(), std::back_inserter(scan),
              config.scan_width, rng);

  if (strategy.memory > 0) {
    state.history.push_back(scan);
    if (static_cast<int>(state.history.size()) > strategy.memory)
      state.history.erase(state.history.begin());
  }
  return scan;
}

void on_detection(const JammerStrategy& strategy, JammerState& state,
                  const NetworkConfig& config, std::mt19937_64& rng) {
  if (strategy.kind != JammerStrategy::Kind::ReactiveSweep) return;
  state.pattern = random_pattern(config, rng);
  state.position = 0;
  state.history.clear();
}

}  // namespace antijam
