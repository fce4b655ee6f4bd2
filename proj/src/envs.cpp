#include "mfcg/envs.hpp"

#include <cmath>

namespace mfcg {

SimplexVector discretize_gaussian(double mean, double std, const Grid& grid) {
  if (!(std > 0.0)) throw DimensionError("Gaussian standard deviation must be positive");
  std::vector<double> w(grid.size());
  const double norm = grid.step() / (std * std::sqrt(2.0 * M_PI));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double z = (grid.point(i) - mean) / std;
    w[i] = norm * std::exp(-0.5 * z * z);
  }
  return SimplexVector::from_weights(std::move(w));
}

SimplexVector EnvSpec::initial_dist() const {
  if (const auto* g = std::get_if<GaussianInit>(&initial)) {
    return discretize_gaussian(g->mean, g->std, state_grid);
  }
  const auto& dist = std::get<SimplexVector>(initial);
  if (dist.size() != state_grid.size()) throw DimensionError("initial distribution does not match state grid");
  return dist;
}

Environment::Environment(EnvSpec spec) : spec_(std::move(spec)), noise_scale_(0.0) {
  if (!(spec_.dt > 0.0)) throw DimensionError("dt must be positive");
  if (!(spec_.sigma >= 0.0)) throw DimensionError("sigma must be non-negative");
  if (spec_.horizon_steps < 1) throw DimensionError("horizon_steps must be at least 1");
  if (!(spec_.discount_gamma > 0.0 && spec_.discount_gamma <= 1.0)) {
    throw DimensionError("discount_gamma must lie in (0, 1]");
  }
  noise_scale_ = spec_.sigma * std::sqrt(spec_.dt);
}

std::size_t Environment::reset(const SimplexVector& initial, RngStream& rng) const {
  if (initial.size() != spec_.state_grid.size()) throw DimensionError("initial distribution does not match state grid");
  return rng.categorical(initial);
}

std::size_t Environment::step(std::size_t state, std::size_t action, RngStream& rng) const {
  const double x = spec_.state_grid.point(state);
  const double a = spec_.action_grid.point(action);
  const double xi = rng.normal();
  return spec_.state_grid.project(x + a * spec_.dt + noise_scale_ * xi);
}

double lq_running_cost(const LqCostParams& p, double x, double a, double m_global, double m_local) {
  const double g = x - p.c2 * m_global;
  const double own = x - p.c4;
  const double loc = x - p.c2_tilde * m_local;
  return 0.5 * a * a + p.c1 * g * g + p.c3 * own * own + p.c1_tilde * loc * loc + p.c5_tilde * m_local * m_local;
}

double trader_running_cost(const TraderCostParams& p, double x, double a, double mean_action_global,
                           double mean_state_local) {
  return 0.5 * p.c_x * mean_state_local * mean_state_local + 0.5 * p.c_alpha * a * a -
         p.c_h * x * mean_action_global;
}

double trader_terminal_cost(const TraderCostParams& p, double x) { return 0.5 * p.c_g * x * x; }

double mean_action_of(const SimplexVector& nu, const Grid& action_grid) {
  const std::size_t na = action_grid.size();
  if (nu.size() % na != 0) throw DimensionError("pair distribution length is not a multiple of the action count");
  double m = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) m += nu[i] * action_grid.point(i % na);
  return m;
}

SimplexVector state_marginal(const SimplexVector& nu, std::size_t state_count, std::size_t action_count) {
  if (nu.size() != state_count * action_count) throw DimensionError("pair distribution shape mismatch");
  std::vector<double> w(state_count, 0.0);
  for (std::size_t s = 0; s < state_count; ++s) {
    for (std::size_t a = 0; a < action_count; ++a) w[s] += nu[s * action_count + a];
  }
  return SimplexVector::from_weights(std::move(w));
}

LqEnvironment::LqEnvironment(EnvSpec spec, LqCostParams params)
    : Environment(std::move(spec)), params_(params) {
  if (!(params_.c1 > 0.0 && params_.c1_tilde > 0.0 && params_.c5_tilde > 0.0)) {
    throw DegenerateParametersError("c1, c1_tilde and c5_tilde must be positive");
  }
}

MeanField LqEnvironment::summarize(const SimplexVector& global, const SimplexVector& local) const {
  return {mean_of(global, spec().state_grid), mean_of(local, spec().state_grid)};
}

double LqEnvironment::running_cost(std::size_t state, std::size_t action, const MeanField& mf) const {
  return lq_running_cost(params_, spec().state_grid.point(state), spec().action_grid.point(action), mf.global,
                         mf.local);
}

TraderEnvironment::TraderEnvironment(EnvSpec spec, TraderCostParams params)
    : Environment(std::move(spec)), params_(params) {
  if (!(params_.c_alpha > 0.0)) throw DegenerateParametersError("c_alpha must be positive");
}

MeanField TraderEnvironment::summarize(const SimplexVector& global, const SimplexVector& local) const {
  const auto& xs = spec().state_grid;
  const auto& as = spec().action_grid;
  if (global.size() != spec().pair_count() || local.size() != spec().pair_count()) {
    throw DimensionError("trader distributions must be over state-action pairs");
  }
  double local_mean = 0.0;
  for (std::size_t i = 0; i < local.size(); ++i) local_mean += local[i] * xs.point(i / as.size());
  return {mean_action_of(global, as), local_mean};
}

double TraderEnvironment::running_cost(std::size_t state, std::size_t action, const MeanField& mf) const {
  return trader_running_cost(params_, spec().state_grid.point(state), spec().action_grid.point(action), mf.global,
                             mf.local);
}

double TraderEnvironment::terminal_cost(std::size_t state) const {
  return trader_terminal_cost(params_, spec().state_grid.point(state));
}

}  // namespace mfcg
