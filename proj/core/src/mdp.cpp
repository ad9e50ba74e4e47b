#include "antijam/mdp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace antijam {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr int kMaxSweeps = 1'000'000;
constexpr double kLinearResidualTol = 1e-10;
constexpr int kTruncationFactor = 4;  // non-terminating streak spaces stop at 4*T

void check_row(const std::vector<double>& row, const std::string& what) {
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0 && p <= 1.0))
      throw NumericalError("kernel row " + what + " has entry outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kRowSumTol)
    throw NumericalError("kernel row " + what + " sums to " + std::to_string(sum));
}

}  // namespace

void MdpModel::validate() const {
  config.validate();
  if (!(inactive_prob >= 0.0 && inactive_prob <= 1.0))
    throw ConfigError("theta: must lie in [0,1]");
  if (config.pairs == 1 && inactive_prob > 0.0)
    throw ConfigError("theta: must be 0 in a single-user network");
  if (space.max_streak < 1) throw ConfigError("model: need max_streak >= 1");
  if (static_cast<int>(hop_row.size()) != space.size())
    throw NumericalError("model: hop row has wrong length");
  if (static_cast<int>(stay_rows.size()) != space.max_streak)
    throw NumericalError("model: expected one stay row per streak");
  check_row(hop_row, "(*,hop)");
  for (int k = 1; k <= space.max_streak; ++k)
    check_row(stay_row(k), "(" + std::to_string(k) + ",stay)");
}

namespace {

MdpModel new_model(const NetworkConfig& config, const RewardParams& rewards,
                   double theta, int max_streak, bool truncated) {
  MdpModel m;
  m.config = config;
  m.rewards = rewards;
  m.space = StateSpace{max_streak, config.pairs >= 2};
  m.inactive_prob = theta;
  m.truncated = truncated;
  m.hop_row.assign(m.space.size(), 0.0);
  m.hop_row[m.space.jammed()] = (1.0 - theta) * config.scan_width / config.channels;
  if (m.space.with_inactive) m.hop_row[m.space.inactive()] = theta;
  m.hop_row[m.space.streak(1)] =
      (1.0 - theta) * (config.channels - config.scan_width) / config.channels;
  m.stay_rows.assign(max_streak, std::vector<double>(m.space.size(), 0.0));
  return m;
}

void require_theta(const NetworkConfig& config, double theta) {
  config.validate();
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("theta: must lie in [0,1]");
  if (config.pairs == 1 && theta > 0.0)
    throw ConfigError("theta: must be 0 in a single-user network");
}

}  // namespace

MdpModel sweep_kernel(const NetworkConfig& config, const RewardParams& rewards,
                      double inactive_prob) {
  require_theta(config, inactive_prob);
  const int period = config.sweep_period();
  MdpModel m = new_model(config, rewards, inactive_prob, period - 1, false);
  const double M = config.channels, w = config.scan_width;
  for (int k = 1; k <= period - 2; ++k) {
    const double jam = w / (M - k * w);
    m.stay_rows[k - 1][m.space.jammed()] = jam;
    m.stay_rows[k - 1][m.space.streak(k + 1)] = 1.0 - jam;
  }
  // A full sweep covers every channel within T slots: the longest possible
  // streak is T-1 and extending it always fails.
  m.stay_rows[period - 2][m.space.jammed()] = 1.0;
  m.validate();
  return m;
}

MdpModel gmemory_kernel(const NetworkConfig& config, const RewardParams& rewards,
                        double inactive_prob, int memory) {
  require_theta(config, inactive_prob);
  const int period = config.sweep_period();
  if (memory < 0 || memory > period - 1)
    throw ConfigError("jammer: memory must lie in [0:T-1]");
  if (memory == period - 1) return sweep_kernel(config, rewards, inactive_prob);

  const int max_streak = kTruncationFactor * period;
  MdpModel m = new_model(config, rewards, inactive_prob, max_streak, true);
  const double M = config.channels, w = config.scan_width;
  for (int k = 1; k <= max_streak; ++k) {
    const double jam = w / (M - std::min(k, memory) * w);
    m.stay_rows[k - 1][m.space.jammed()] = jam;
    const int next = k < max_streak ? m.space.streak(k + 1) : m.space.streak(max_streak);
    m.stay_rows[k - 1][next] = 1.0 - jam;
  }
  m.validate();
  return m;
}

double ValueTable::q(int state_id, Action a) const {
  if (a == Action::Hop) return q_hop[state_id];
  if (!space.is_streak(state_id))
    throw std::invalid_argument("action 'stay' only defined for streak states");
  return q_stay[space.streak_length(state_id) - 1];
}

ValueTable value_iteration(const MdpModel& model, double tol) {
  if (!(tol > 0)) throw ConfigError("tol: must be > 0");
  const StateSpace& sp = model.space;
  const int n = sp.size();
  const double gamma = model.rewards.discount;

  // Rewards per (state, hop); staying always yields R.
  std::vector<double> hop_reward(n);
  for (int id = 0; id < n; ++id) hop_reward[id] = model.slot_reward(id, Action::Hop);

  std::vector<double> v(n, 0.0), v_next(n);
  int sweeps = 0;
  for (;; ++sweeps) {
    if (sweeps >= kMaxSweeps)
      throw NumericalError("value iteration: sweep cap exceeded (kernel bug?)");
    // The hop continuation is shared by every source state.
    double hop_cont = 0.0;
    for (int id = 0; id < n; ++id) hop_cont += model.hop_row[id] * v[id];
    hop_cont *= gamma;

    double delta = 0.0;
    for (int id = 0; id < n; ++id) {
      double best = hop_reward[id] + hop_cont;
      if (sp.is_streak(id)) {
        const auto& row = model.stay_row(sp.streak_length(id));
        double cont = 0.0;
        for (int j = 0; j < n; ++j) cont += row[j] * v[j];
        best = std::max(best, model.rewards.success_reward + gamma * cont);
      }
      v_next[id] = best;
      delta = std::max(delta, std::abs(best - v[id]));
    }
    v.swap(v_next);
    if (delta < tol) break;
  }

  // Final tables from the converged values; v = max Q holds exactly.
  ValueTable t;
  t.space = sp;
  t.sweeps = sweeps + 1;
  t.q_hop.resize(n);
  t.q_stay.resize(sp.max_streak);
  t.v.resize(n);
  double hop_cont = 0.0;
  for (int id = 0; id < n; ++id) hop_cont += model.hop_row[id] * v[id];
  hop_cont *= gamma;
  for (int id = 0; id < n; ++id) {
    t.q_hop[id] = hop_reward[id] + hop_cont;
    t.v[id] = t.q_hop[id];
  }
  for (int k = 1; k <= sp.max_streak; ++k) {
    const auto& row = model.stay_row(k);
    double cont = 0.0;
    for (int j = 0; j < n; ++j) cont += row[j] * v[j];
    t.q_stay[k - 1] = model.rewards.success_reward + gamma * cont;
    const int id = sp.streak(k);
    t.v[id] = std::max(t.v[id], t.q_stay[k - 1]);
  }
  return t;
}

StayingPolicy greedy_policy(const ValueTable& table) {
  const StateSpace& sp = table.space;
  int threshold = 0;
  for (int k = 1; k <= sp.max_streak; ++k)
    if (table.q_stay[k - 1] >= table.q_hop[sp.streak(k)]) threshold = k;

  // Single crossing: staying must be preferred at every streak below the
  // threshold, otherwise the table is not of the staying-policy form.
  std::string offending;
  for (int k = 1; k < threshold; ++k) {
    if (table.q_stay[k - 1] < table.q_hop[sp.streak(k)])
      offending += (offending.empty() ? "" : ", ") + std::to_string(k);
  }
  if (!offending.empty())
    throw NumericalError(
        "greedy policy: action values are not single-crossing; staying loses at "
        "streaks {" + offending + "} below threshold " + std::to_string(threshold));
  return StayingPolicy{threshold};
}

namespace {

/// States reachable under `policy`: J, I (when present), and streaks
/// 1..min(threshold+1, max_streak).  Hop lands in {J, I, 1}; stay walks the
/// streak chain one step past the threshold at most.
std::vector<int> visitable_states(const StateSpace& sp, const StayingPolicy& policy) {
  std::vector<int> ids;
  ids.push_back(sp.jammed());
  if (sp.with_inactive) ids.push_back(sp.inactive());
  long top = policy.is_minimal_hopping()
                 ? sp.max_streak
                 : std::min<long>(static_cast<long>(policy.threshold) + 1, sp.max_streak);
  for (int k = 1; k <= top; ++k) ids.push_back(sp.streak(k));
  return ids;
}

}  // namespace

ValueTable policy_evaluation(const MdpModel& model, const StayingPolicy& policy) {
  const StateSpace& sp = model.space;
  const double gamma = model.rewards.discount;
  const std::vector<int> ids = visitable_states(sp, policy);
  const int n = static_cast<int>(ids.size());

  std::vector<int> local(sp.size(), -1);
  for (int i = 0; i < n; ++i) local[ids[i]] = i;

  // (I - gamma * P_pi) V = U_pi over visitable states.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    const int id = ids[i];
    const Action act = sp.is_streak(id) ? policy.act_on_streak(sp.streak_length(id))
                                        : Action::Hop;
    const auto& row =
        act == Action::Hop ? model.hop_row : model.stay_row(sp.streak_length(id));
    b(i) = model.slot_reward(id, act);
    for (int j = 0; j < sp.size(); ++j) {
      if (row[j] == 0.0) continue;
      if (local[j] < 0)
        throw std::logic_error("policy evaluation: successor outside visitable set");
      a(i, local[j]) -= gamma * row[j];
    }
  }

  Eigen::VectorXd x = a.partialPivLu().solve(b);
  const double residual = (a * x - b).lpNorm<Eigen::Infinity>();
  if (!(residual < kLinearResidualTol))
    throw NumericalError("policy evaluation: linear solve residual " +
                         std::to_string(residual) + " (singular system?)");

  ValueTable t;
  t.space = sp;
  t.v.assign(sp.size(), std::numeric_limits<double>::quiet_NaN());
  t.q_hop.assign(sp.size(), std::numeric_limits<double>::quiet_NaN());
  t.q_stay.assign(sp.max_streak, std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < n; ++i) {
    const int id = ids[i];
    t.v[id] = x(i);
    const Action act = sp.is_streak(id) ? policy.act_on_streak(sp.streak_length(id))
                                        : Action::Hop;
    if (act == Action::Hop)
      t.q_hop[id] = x(i);
    else
      t.q_stay[sp.streak_length(id) - 1] = x(i);
  }
  return t;
}

double edsr(const MdpModel& model, const StayingPolicy& policy) {
  const ValueTable t = policy_evaluation(model, policy);
  const StateSpace& sp = model.space;
  double out = model.hop_row[sp.jammed()] * t.v[sp.jammed()] +
               model.hop_row[sp.streak(1)] * t.v[sp.streak(1)];
  if (sp.with_inactive) out += model.hop_row[sp.inactive()] * t.v[sp.inactive()];
  return out;
}

}  // namespace antijam
