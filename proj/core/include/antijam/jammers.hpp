#pragma once

#include <random>
#include <string>
#include <vector>

#include "antijam/types.hpp"

namespace antijam {

/// Jamming strategies stepped once per slot by the simulator.
///
///  - GMemory(G): scan a uniform random m-subset of the channels not scanned
///    in the last G slots.  G = 0 is plain random jamming; G = T-1 covers all
///    channels every T slots.
///  - BasicSweep: scan a fixed partition of the M channels into T blocks,
///    cyclically.
///  - ReactiveSweep: basic sweep that re-randomizes its pattern whenever a
///    scan hits an active communication.
struct JammerStrategy {
  enum class Kind { GMemory, BasicSweep, ReactiveSweep };

  Kind kind = Kind::BasicSweep;
  int memory = 0;  // G, for GMemory only

  static JammerStrategy gmemory(int g) { return {Kind::GMemory, g}; }
  static JammerStrategy random_jamming() { return gmemory(0); }
  static JammerStrategy basic_sweep() { return {Kind::BasicSweep, 0}; }
  static JammerStrategy reactive_sweep() { return {Kind::ReactiveSweep, 0}; }

  bool is_sweep() const { return kind != Kind::GMemory; }

  std::string label() const {
    switch (kind) {
      case Kind::BasicSweep: return "sweep";
      case Kind::ReactiveSweep: return "reactive";
      default: return "gmemory:" + std::to_string(memory);
    }
  }

  void validate(const NetworkConfig& config) const {
    if (kind == Kind::GMemory &&
        (memory < 0 || memory > config.sweep_period() - 1))
      throw ConfigError("jammer: memory must lie in [0:T-1]");
  }

  friend bool operator==(const JammerStrategy&, const JammerStrategy&) = default;
};

/// Mutable jammer state.  Sweep strategies own a pattern (a permutation of
/// the channels read as T blocks of m) and a position; G-memory owns the ring
/// of its recent scans.
struct JammerState {
  std::vector<int> pattern;                // sweep strategies
  int position = 0;
  std::vector<std::vector<int>> history;   // G-memory: last <= G scan sets
};

/// Fresh state for a strategy; sweep patterns are drawn uniformly at random
/// from the rng (one draw per run).
JammerState make_jammer_state(const JammerStrategy& strategy,
                              const NetworkConfig& config, std::mt19937_64& rng);

/// Sweep state with an explicit pattern (tests; pattern must be a permutation
/// of the channels).
JammerState make_sweep_state(std::vector<int> pattern, const NetworkConfig& config);

/// Channels scanned this slot (sorted), advancing the state.
std::vector<int> next_scan(const JammerStrategy& strategy, JammerState& state,
                           const NetworkConfig& config, std::mt19937_64& rng);

/// Called when the slot's scan hit at least one active communication.
/// Reactive sweep restarts with a fresh random pattern from the next slot on;
/// every other strategy ignores detections.
void on_detection(const JammerStrategy& strategy, JammerState& state,
                  const NetworkConfig& config, std::mt19937_64& rng);

}  // namespace antijam
