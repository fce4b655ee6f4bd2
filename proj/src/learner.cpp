#include "mfcg/learner.hpp"

#include <algorithm>
#include <limits>

namespace mfcg {

namespace {

double row_min(std::span<const double> row) { return *std::min_element(row.begin(), row.end()); }

void check_rate(double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) throw InvalidRateError("Q learning rate must lie in (0, 1]");
}

double max_sup_distance(const std::vector<SimplexVector>& a, const std::vector<SimplexVector>& b) {
  if (a.size() != b.size()) throw DimensionError("distribution flows differ in length");
  double d = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) d = std::max(d, sup_distance(a[t].mass(), b[t].mass()));
  return d;
}

StopDecision decide(double dq, double dmu, double dmu_tilde, std::uint64_t episode, const StopRule& rule) {
  if (episode >= rule.max_episodes) return StopDecision::kStop;
  if (rule.tol_q && rule.tol_mu && rule.tol_mu_tilde && dq <= *rule.tol_q && dmu <= *rule.tol_mu &&
      dmu_tilde <= *rule.tol_mu_tilde) {
    return StopDecision::kStop;
  }
  return StopDecision::kContinue;
}

bool tolerances_enabled(const StopRule& rule) { return rule.tol_q && rule.tol_mu && rule.tol_mu_tilde; }

}  // namespace

InfiniteHorizonState InfiniteHorizonState::initial(const EnvSpec& spec) {
  const std::size_t ns = spec.state_grid.size();
  const std::size_t na = spec.action_grid.size();
  std::vector<SimplexVector> flow(spec.horizon_steps + 1, SimplexVector::uniform(ns));
  return {QTable(ns, na), flow, flow, VisitCounter(ns, na), 0};
}

FiniteHorizonState FiniteHorizonState::initial(const EnvSpec& spec) {
  const std::size_t ns = spec.state_grid.size();
  const std::size_t na = spec.action_grid.size();
  std::vector<SimplexVector> flow(spec.horizon_steps + 1, SimplexVector::uniform(ns * na));
  return {std::vector<QTable>(spec.horizon_steps, QTable(ns, na)), flow, flow,
          VisitCounter(ns, na, spec.horizon_steps), 0};
}

std::size_t epsilon_greedy(std::span<const double> q_row, double epsilon, RngStream& rng) {
  if (q_row.empty()) throw DimensionError("epsilon-greedy over an empty action set");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidRateError("epsilon must lie in [0, 1]");
  if (rng.uniform() < epsilon) return rng.index(q_row.size());
  return argmin(q_row);
}

void q_update_infinite(QTable& q, std::size_t x, std::size_t a, std::size_t next_x, double cost, double gamma,
                       double rate) {
  check_rate(rate);
  const double target = cost + gamma * row_min(q.row(next_x));
  q(x, a) += rate * (target - q(x, a));
}

void q_update_finite(QTable& q_t, const QTable* q_next, std::optional<double> terminal_cost, std::size_t x,
                     std::size_t a, std::size_t next_x, double cost, double rate) {
  if ((q_next != nullptr) == terminal_cost.has_value()) {
    throw ContractError("exactly one of the next Q-table or the terminal cost must be supplied");
  }
  check_rate(rate);
  const double continuation = q_next ? row_min(q_next->row(next_x)) : *terminal_cost;
  q_t(x, a) += rate * (cost + continuation - q_t(x, a));
}

void run_episode_infinite(InfiniteHorizonState& state, const Environment& env, const LearnerParams& params,
                          RngStream& rng) {
  const EnvSpec& spec = env.spec();
  const std::uint64_t k = state.episode;
  const double rho_mu = rho_episode(k, params.rates.omega_mu);
  const double rho_mu_tilde = rho_episode(k, params.rates.omega_mu_tilde);
  const double gamma = spec.discount_gamma;
  const double omega_q = params.rates.omega_q;

  std::size_t x = env.reset(state.mu.back(), rng);
  for (std::size_t t = 0; t <= spec.horizon_steps; ++t) {
    const std::size_t a = epsilon_greedy(state.q.row(x), params.epsilon, rng);
    state.mu[t].mix_toward(x, rho_mu);
    state.mu_tilde[t].mix_toward(x, rho_mu_tilde);
    const std::size_t next_x = env.step(x, a, rng);
    const double cost = env.running_cost(x, a, env.summarize(state.mu[t], state.mu_tilde[t])) * spec.dt;
    const double rate = rho_q_infinite(state.visits.bump(x, a), omega_q);
    q_update_infinite(state.q, x, a, next_x, cost, gamma, rate);
    x = next_x;
  }
  ++state.episode;
}

void run_episode_finite(FiniteHorizonState& state, const Environment& env, const LearnerParams& params,
                        RngStream& rng) {
  const EnvSpec& spec = env.spec();
  const std::size_t horizon = spec.horizon_steps;
  const std::uint64_t k = state.episode;
  const double rho_nu = rho_episode(k, params.rates.omega_mu);
  const double rho_nu_tilde = rho_episode(k, params.rates.omega_mu_tilde);

  std::optional<std::vector<QTable>> frozen;
  if (params.snapshot_q) frozen = state.q_by_time;
  const std::vector<QTable>& acting = frozen ? *frozen : state.q_by_time;

  std::size_t x = env.reset(spec.initial_dist(), rng);
  for (std::size_t t = 0; t < horizon; ++t) {
    const std::size_t a = epsilon_greedy(acting[t].row(x), params.epsilon, rng);
    const std::size_t pair = spec.pair_index(x, a);
    state.nu[t].mix_toward(pair, rho_nu);
    state.nu_tilde[t].mix_toward(pair, rho_nu_tilde);
    const std::size_t next_x = env.step(x, a, rng);
    const double cost = env.running_cost(x, a, env.summarize(state.nu[t], state.nu_tilde[t])) * spec.dt;
    const double rate = rho_q_finite(state.visits.bump(x, a, t), horizon, params.rates.omega_q);
    if (t + 1 == horizon) {
      q_update_finite(state.q_by_time[t], nullptr, env.terminal_cost(next_x), x, a, next_x, cost, rate);
    } else {
      q_update_finite(state.q_by_time[t], &acting[t + 1], std::nullopt, x, a, next_x, cost, rate);
    }
    x = next_x;
  }
  ++state.episode;
}

StopDecision check_stop(const InfiniteHorizonState& prev, const InfiniteHorizonState& curr, const StopRule& rule) {
  if (!tolerances_enabled(rule)) return decide(0, 0, 0, curr.episode, rule);
  return decide(sup_distance(prev.q.values(), curr.q.values()), max_sup_distance(prev.mu, curr.mu),
                max_sup_distance(prev.mu_tilde, curr.mu_tilde), curr.episode, rule);
}

StopDecision check_stop(const FiniteHorizonState& prev, const FiniteHorizonState& curr, const StopRule& rule) {
  if (!tolerances_enabled(rule)) return decide(0, 0, 0, curr.episode, rule);
  double dq = 0.0;
  for (std::size_t t = 0; t < curr.q_by_time.size(); ++t) {
    dq = std::max(dq, sup_distance(prev.q_by_time[t].values(), curr.q_by_time[t].values()));
  }
  return decide(dq, max_sup_distance(prev.nu, curr.nu), max_sup_distance(prev.nu_tilde, curr.nu_tilde),
                curr.episode, rule);
}

namespace {

template <typename State, typename Step, typename Observer>
State train(State state, const StopRule& rule, Step&& step, const Observer& observer) {
  if (rule.max_episodes < 1) throw ContractError("max_episodes must be at least 1");
  const bool track = tolerances_enabled(rule);
  while (true) {
    std::optional<State> prev;
    if (track) prev = state;
    step(state);
    if (observer) observer(state);
    const StopDecision d = track ? check_stop(*prev, state, rule)
                                 : (state.episode >= rule.max_episodes ? StopDecision::kStop : StopDecision::kContinue);
    if (d == StopDecision::kStop) break;
  }
  return state;
}

}  // namespace

InfiniteHorizonState train_infinite(const Environment& env, const LearnerParams& params, const StopRule& rule,
                                    RngStream& rng, const InfiniteObserver& observer) {
  return train(
      InfiniteHorizonState::initial(env.spec()), rule,
      [&](InfiniteHorizonState& s) { run_episode_infinite(s, env, params, rng); }, observer);
}

FiniteHorizonState train_finite(const Environment& env, const LearnerParams& params, const StopRule& rule,
                                RngStream& rng, const FiniteObserver& observer) {
  return train(
      FiniteHorizonState::initial(env.spec()), rule,
      [&](FiniteHorizonState& s) { run_episode_finite(s, env, params, rng); }, observer);
}

std::vector<std::size_t> greedy_policy(const QTable& q) {
  std::vector<std::size_t> out(q.states());
  for (std::size_t s = 0; s < q.states(); ++s) out[s] = argmin_row(q, s);
  return out;
}

}  // namespace mfcg
