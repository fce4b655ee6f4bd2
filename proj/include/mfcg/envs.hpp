#pragma once

#include <cstddef>
#include <variant>

#include "mfcg/core.hpp"

namespace mfcg {

struct GaussianInit {
  double mean = 0.0;
  double std = 1.0;
};

/// Either an explicit distribution over the state grid or a Gaussian that is
/// discretized onto it.
using InitialDist = std::variant<SimplexVector, GaussianInit>;

/// Gaussian pdf evaluated at the grid nodes, times step, normalized.
SimplexVector discretize_gaussian(double mean, double std, const Grid& grid);

struct EnvSpec {
  Grid state_grid;
  Grid action_grid;
  double dt = 0.01;
  double sigma = 0.0;
  std::size_t horizon_steps = 1;
  double discount_gamma = 1.0;
  InitialDist initial = GaussianInit{};

  SimplexVector initial_dist() const;
  std::size_t pair_count() const noexcept { return state_grid.size() * action_grid.size(); }
  std::size_t pair_index(std::size_t s, std::size_t a) const noexcept { return s * action_grid.size() + a; }
};

/// First moments of the two distributions that enter the running cost.
/// Their meaning depends on the benchmark.
struct MeanField {
  double global = 0.0;
  double local = 0.0;
};

/// Model-free environment seen by the learners. Stateless apart from the RNG
/// handed in per call.
class Environment {
 public:
  explicit Environment(EnvSpec spec);
  virtual ~Environment() = default;

  const EnvSpec& spec() const noexcept { return spec_; }

  std::size_t reset(const SimplexVector& initial, RngStream& rng) const;

  /// Euler step x + a dt + sigma sqrt(dt) xi projected onto the state grid.
  std::size_t step(std::size_t state, std::size_t action, RngStream& rng) const;

  /// Reduces the learner's global/local distribution estimates to the
  /// statistics the cost depends on.
  virtual MeanField summarize(const SimplexVector& global, const SimplexVector& local) const = 0;

  /// Continuous-time running cost f; learners multiply by dt.
  virtual double running_cost(std::size_t state, std::size_t action, const MeanField& mf) const = 0;

  virtual double terminal_cost(std::size_t /*state*/) const { return 0.0; }

 private:
  EnvSpec spec_;
  double noise_scale_;
};

struct LqCostParams {
  double c1 = 0.5;
  double c2 = 1.5;
  double c3 = 0.5;
  double c4 = 0.25;
  double c1_tilde = 0.3;
  double c2_tilde = 1.25;
  double c5_tilde = 0.25;
};

/// 1/2 a^2 + c1 (x - c2 m)^2 + c3 (x - c4)^2 + c1~ (x - c2~ m~)^2 + c5~ m~^2
double lq_running_cost(const LqCostParams& p, double x, double a, double m_global, double m_local);

struct TraderCostParams {
  double c_alpha = 1.0;
  double c_x = 0.75;
  double c_h = 1.25;
  double c_g = 1.0;
};

/// c_x/2 m~^2 + c_alpha/2 a^2 - c_h x abar, with abar the population's mean action.
double trader_running_cost(const TraderCostParams& p, double x, double a, double mean_action_global,
                           double mean_state_local);

double trader_terminal_cost(const TraderCostParams& p, double x);

/// Mean action of a distribution over state x action pairs (pair index s*|A| + a).
double mean_action_of(const SimplexVector& nu, const Grid& action_grid);

/// State marginal of a distribution over state x action pairs.
SimplexVector state_marginal(const SimplexVector& nu, std::size_t state_count, std::size_t action_count);

/// Infinite-horizon linear-quadratic benchmark; distributions are over states.
class LqEnvironment final : public Environment {
 public:
  LqEnvironment(EnvSpec spec, LqCostParams params);

  const LqCostParams& params() const noexcept { return params_; }

  MeanField summarize(const SimplexVector& global, const SimplexVector& local) const override;
  double running_cost(std::size_t state, std::size_t action, const MeanField& mf) const override;

 private:
  LqCostParams params_;
};

/// Finite-horizon trader benchmark; distributions are over state-action pairs.
/// The global one supplies the mean action, the local one the mean inventory.
class TraderEnvironment final : public Environment {
 public:
  TraderEnvironment(EnvSpec spec, TraderCostParams params);

  const TraderCostParams& params() const noexcept { return params_; }

  MeanField summarize(const SimplexVector& global, const SimplexVector& local) const override;
  double running_cost(std::size_t state, std::size_t action, const MeanField& mf) const override;
  double terminal_cost(std::size_t state) const override;

 private:
  TraderCostParams params_;
};

}  // namespace mfcg
