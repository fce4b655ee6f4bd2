#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mfcg/core.hpp"
#include "mfcg/envs.hpp"
#include "mfcg/rates.hpp"

namespace mfcg {

struct LearnerParams {
  RateExponents rates;
  double epsilon = 0.01;
  // Finite horizon only: act and bootstrap from the Q-tables frozen at the
  // start of the episode instead of updating in place.
  bool snapshot_q = false;
};

/// Break rule. A tolerance left empty is disabled; the tolerance test only
/// fires when all three are set.
struct StopRule {
  std::optional<double> tol_q;
  std::optional<double> tol_mu;
  std::optional<double> tol_mu_tilde;
  std::uint64_t max_episodes = 1;
};

enum class StopDecision { kContinue, kStop };

/// Learner state for the discounted infinite-horizon algorithm.
/// mu / mu_tilde hold one state distribution per time step t = 0..T.
struct InfiniteHorizonState {
  QTable q;
  std::vector<SimplexVector> mu;
  std::vector<SimplexVector> mu_tilde;
  VisitCounter visits;
  std::uint64_t episode = 0;

  /// Zero Q-table and uniform distributions.
  static InfiniteHorizonState initial(const EnvSpec& spec);
};

/// Learner state for the finite-horizon algorithm. One Q-table per decision
/// time t = 0..T-1; state-action distributions for t = 0..T.
struct FiniteHorizonState {
  std::vector<QTable> q_by_time;
  std::vector<SimplexVector> nu;
  std::vector<SimplexVector> nu_tilde;
  VisitCounter visits;
  std::uint64_t episode = 0;

  static FiniteHorizonState initial(const EnvSpec& spec);
};

/// Greedy (lowest-index argmin) with probability 1 - epsilon, otherwise a
/// uniform action that may coincide with the greedy one.
std::size_t epsilon_greedy(std::span<const double> q_row, double epsilon, RngStream& rng);

/// Q(x,a) += rate * (cost + gamma * min_a' Q(next_x, a') - Q(x,a)).
void q_update_infinite(QTable& q, std::size_t x, std::size_t a, std::size_t next_x, double cost, double gamma,
                       double rate);

/// Q_t(x,a) += rate * (cost + B - Q_t(x,a)) where B is min_a' Q_{t+1}(next_x, a')
/// or the terminal cost. Exactly one continuation source must be given.
void q_update_finite(QTable& q_t, const QTable* q_next, std::optional<double> terminal_cost, std::size_t x,
                     std::size_t a, std::size_t next_x, double cost, double rate);

void run_episode_infinite(InfiniteHorizonState& state, const Environment& env, const LearnerParams& params,
                          RngStream& rng);

void run_episode_finite(FiniteHorizonState& state, const Environment& env, const LearnerParams& params,
                        RngStream& rng);

StopDecision check_stop(const InfiniteHorizonState& prev, const InfiniteHorizonState& curr, const StopRule& rule);
StopDecision check_stop(const FiniteHorizonState& prev, const FiniteHorizonState& curr, const StopRule& rule);

using InfiniteObserver = std::function<void(const InfiniteHorizonState&)>;
using FiniteObserver = std::function<void(const FiniteHorizonState&)>;

/// Runs episodes until the stop rule fires. The observer sees the state after
/// every episode.
InfiniteHorizonState train_infinite(const Environment& env, const LearnerParams& params, const StopRule& rule,
                                    RngStream& rng, const InfiniteObserver& observer = {});

FiniteHorizonState train_finite(const Environment& env, const LearnerParams& params, const StopRule& rule,
                                RngStream& rng, const FiniteObserver& observer = {});

/// Greedy action index per state.
std::vector<std::size_t> greedy_policy(const QTable& q);

}  // namespace mfcg
