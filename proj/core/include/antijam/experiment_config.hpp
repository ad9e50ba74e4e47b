#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "antijam/arms_race.hpp"
#include "antijam/jammers.hpp"
#include "antijam/netsim.hpp"
#include "antijam/types.hpp"

namespace antijam {

/// One experiment, loadable from a flat dotted-key config file:
///
///   network.M = 60        # channels
///   network.m = 5         # channels scanned per slot
///   network.n = 1         # S-R pairs
///   rewards.R = 5
///   rewards.C = 5
///   rewards.L = 20
///   rewards.gamma = 0.9
///   protocol = all-hopping        # or: random
///   jammer = sweep                # or: reactive, random, gmemory:G
///   policy = optimize             # or: a threshold, or inf
///   theta = 0                     # solve-only: assumed inactive probability
///   seed = 1
///   sim.episodes = 10000
///   sim.horizon = 0               # 0 = smallest horizon within tail tolerance
///   sim.warmup = 0                # 0 = default warmup
///   sim.theta_halfwidth = 0.002
///   output = out.csv
///
/// '#' starts a comment; blank lines are skipped.  Command-line flags
/// override file values.
struct ExperimentConfig {
  NetworkConfig network;
  RewardParams rewards;
  CollisionProtocol protocol = CollisionProtocol::AllHopping;
  JammerStrategy jammer = JammerStrategy::basic_sweep();
  std::optional<StayingPolicy> policy;  // nullopt = optimize
  double theta = 0.0;
  std::uint64_t seed = 1;
  SimOptions sim{.episodes = 10000, .horizon = 0, .warmup = 0, .theta_halfwidth = 0.002};
  std::string output;
  double detection_error_prob = 0.0;
  double tol = 1e-9;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);

  /// Applies one dotted key; throws ConfigError naming the key on bad input.
  void set(const std::string& key, const std::string& value);

  void validate() const;

  /// Every key with its resolved value, for reproducibility headers.
  std::map<std::string, std::string> echo() const;
};

}  // namespace antijam
