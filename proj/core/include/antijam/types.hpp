#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace antijam {

inline constexpr const char* kVersion = "0.1.0";

/// Invalid user-supplied configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical or convergence failure (CLI exit code 3).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Channel layout of the network: M channels total, the jammer scans m of
/// them per slot, n sender-receiver pairs share the band.  m must divide M;
/// T = M/m is the sweep period.
struct NetworkConfig {
  int channels = 0;    // M
  int scan_width = 0;  // m
  int pairs = 1;       // n

  int sweep_period() const { return channels / scan_width; }  // T

  void validate() const {
    if (channels < 2) throw ConfigError("network.M: need at least 2 channels");
    if (scan_width < 1 || scan_width >= channels)
      throw ConfigError("network.m: scan width must satisfy 1 <= m < M");
    if (channels % scan_width != 0)
      throw ConfigError("network.m: scan width must divide the channel count");
    if (pairs < 1) throw ConfigError("network.n: need at least one S-R pair");
  }
};

/// Per-slot reward shape: R for a successful slot, C to hop, L lost when
/// jammed, discount factor for future slots.
struct RewardParams {
  double success_reward = 0;  // R
  double hop_cost = 0;        // C
  double jam_loss = 0;        // L
  double discount = 0;        // gamma

  void validate() const {
    if (!(success_reward > 0)) throw ConfigError("rewards.R: must be > 0");
    if (!(hop_cost > 0)) throw ConfigError("rewards.C: must be > 0");
    if (!(jam_loss > 0)) throw ConfigError("rewards.L: must be > 0");
    if (!(discount > 0 && discount < 1))
      throw ConfigError("rewards.gamma: must lie in (0,1)");
  }
};

enum class Action : std::uint8_t { Stay, Hop };

inline const char* to_string(Action a) { return a == Action::Stay ? "stay" : "hop"; }

/// Per-user MDP state: jammed, inactive (denied the channel by another
/// pair), or a streak of k consecutive successful slots.
class UserState {
 public:
  static UserState jammed() { return UserState(kJammed); }
  static UserState inactive() { return UserState(kInactive); }
  static UserState streak(int k) {
    if (k < 1) throw std::invalid_argument("streak length must be >= 1");
    return UserState(k);
  }

  bool is_jammed() const { return code_ == kJammed; }
  bool is_inactive() const { return code_ == kInactive; }
  bool is_streak() const { return code_ >= 1; }
  int streak_length() const {
    if (!is_streak()) throw std::logic_error("not a streak state");
    return code_;
  }

  std::string label() const {
    if (is_jammed()) return "J";
    if (is_inactive()) return "I";
    return std::to_string(code_);
  }

  friend auto operator<=>(const UserState&, const UserState&) = default;

 private:
  static constexpr int kJammed = -2;
  static constexpr int kInactive = -1;
  explicit UserState(int code) : code_(code) {}
  int code_;
};

/// K-staying policy: hop after a jam or an inactive slot; otherwise stay
/// while the success streak is <= threshold.  kNoLimit marks the minimal
/// hopping policy, which never hops voluntarily.
struct StayingPolicy {
  static constexpr int kNoLimit = std::numeric_limits<int>::max();

  int threshold = 0;

  static StayingPolicy staying(int k) {
    if (k < 0) throw ConfigError("policy: staying threshold must be >= 0");
    return StayingPolicy{k};
  }
  static StayingPolicy minimal_hopping() { return StayingPolicy{kNoLimit}; }

  bool is_minimal_hopping() const { return threshold == kNoLimit; }

  /// Action prescribed at a success streak of length k (jam/inactive always hop).
  Action act_on_streak(int k) const {
    return k <= threshold ? Action::Stay : Action::Hop;
  }
  Action act(UserState s) const {
    return s.is_streak() ? act_on_streak(s.streak_length()) : Action::Hop;
  }

  std::string label() const {
    return is_minimal_hopping() ? "inf" : std::to_string(threshold);
  }

  friend bool operator==(const StayingPolicy&, const StayingPolicy&) = default;
};

/// Slot reward as a function of state and chosen action.  The only allowed
/// action in states J and I is Hop.
inline double reward(UserState state, Action action, const RewardParams& p) {
  if (state.is_streak())
    return action == Action::Stay ? p.success_reward : p.success_reward - p.hop_cost;
  if (action == Action::Stay)
    throw std::invalid_argument("action 'stay' is not allowed in state " + state.label());
  return state.is_jammed() ? -p.jam_loss - p.hop_cost : -p.hop_cost;
}

}  // namespace antijam
