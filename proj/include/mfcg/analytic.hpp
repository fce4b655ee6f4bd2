#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mfcg/core.hpp"
#include "mfcg/envs.hpp"

namespace mfcg {

// ---------------------------------------------------------------------------
// Asymptotic linear-quadratic benchmark
// ---------------------------------------------------------------------------

/// Quadratic value function V(x) = gamma2 x^2 + gamma1 x + gamma0 at the mean
/// field fixed point, and the Gaussian limit law N(m_hat, limit_var) of the
/// optimally controlled OU state.
struct AsymptoticLqSolution {
  LqCostParams params;
  double beta = 1.0;
  double sigma = 0.0;

  double gamma2 = 0.0;
  double gamma1 = 0.0;
  double gamma0 = 0.0;
  double m_hat = 0.0;
  double limit_var = 0.0;

  /// alpha(x) = -2 gamma2 (x - m_hat)
  double control(double x) const noexcept { return -2.0 * gamma2 * (x - m_hat); }

  /// Linear coefficient for frozen global mean m and local mean m_local.
  double gamma1_at(double m_global, double m_local) const noexcept;

  /// beta gamma2 + 2 gamma2^2 - (c1 + c3 + c1~); zero for an exact solution.
  double quadratic_residual() const noexcept;

  /// m_hat + gamma1_at(m_hat, m_hat) / (2 gamma2); zero at the fixed point.
  double fixed_point_residual() const noexcept;
};

/// Throws DegenerateParametersError when the fixed-point denominator vanishes
/// or beta is not positive.
AsymptoticLqSolution solve_asymptotic_lq(const LqCostParams& params, double beta, double sigma);

SimplexVector asymptotic_theory_distribution(const AsymptoticLqSolution& sol, const Grid& grid);

// ---------------------------------------------------------------------------
// Trader benchmark
// ---------------------------------------------------------------------------

/// Decoupling fields of the trader FBSDE, Y_t = eta(t) X_t + psi(t) and
/// E[Y_t] = eta_bar(t) E[X_t], plus the Gaussian law of the optimal inventory.
/// Time integrals are tabulated by composite trapezoid on a uniform mesh and
/// linearly interpolated between nodes.
class TraderSolution {
 public:
  TraderSolution(const TraderCostParams& params, double horizon, double sigma, double x0, double sigma0,
                 double quad_step);

  const TraderCostParams& params() const noexcept { return params_; }
  double horizon() const noexcept { return horizon_; }

  double delta_plus() const noexcept { return delta_plus_; }
  double delta_minus() const noexcept { return delta_minus_; }
  double B_coef() const noexcept { return b_; }
  double C_coef() const noexcept { return c_; }
  double D_coef() const noexcept { return d_; }
  double R_coef() const noexcept { return r_; }

  double eta(double t) const noexcept;
  double eta_bar(double t) const noexcept;
  double psi(double t) const;
  double mean_x(double t) const;
  double var_x(double t) const;

  /// -(eta(t) x + psi(t)) / c_alpha
  double control(double t, double x) const;

 private:
  double interpolate(const std::vector<double>& table, double t) const;

  TraderCostParams params_;
  double horizon_;
  double sigma_;
  double x0_;
  double sigma0_;
  double b_, c_, d_, r_;
  double delta_plus_, delta_minus_;
  double mesh_step_;
  std::vector<double> int_eta_bar_;  // int_0^t eta_bar(s) / c_alpha ds
  std::vector<double> int_eta_;      // int_0^t eta(s) ds
  std::vector<double> int_var_;      // int_0^t exp(2 int_eta(s) / c_alpha) ds
};

/// Throws UnsupportedParametersError when R = D^2 + BC <= 0.
TraderSolution solve_trader(const TraderCostParams& params, double horizon, double sigma, double x0, double sigma0,
                            double quad_step = 1e-4);

SimplexVector trader_theory_distribution(const TraderSolution& sol, double t, const Grid& grid);

// ---------------------------------------------------------------------------
// Finite-player Riccati system and its many-group limit
// ---------------------------------------------------------------------------

/// eta, phi, zeta sampled on an ascending time mesh 0 = t_0 < ... < t_n = T.
/// groups == nullopt denotes the limit of infinitely many groups.
struct FinitePlayerCoefficients {
  std::optional<long> groups;
  std::vector<double> times;
  std::vector<double> eta;
  std::vector<double> phi;
  std::vector<double> zeta;
  // Sup distance to the tanh closed forms; only set in the limit case
  // (phi only when c2 > 0).
  std::optional<double> eta_closed_form_error;
  std::optional<double> phi_closed_form_error;
};

/// sqrt(c) tanh(sqrt(c) (T - t)), the solution of y' - y^2 = -c with y(T) = 0.
double riccati_tanh_closed_form(double c, double horizon, double t);

/// Backward RK4 from t = T (all coefficients 0) to t = 0 of
///   eta'  - eta^2              = -c1
///   phi'  - phi^2 - 2 phi zeta = -c2 + c1/M
///   zeta' - zeta^2             = -c1/M
/// Throws IntegrationFailureError when a value exceeds 1e6 in magnitude.
FinitePlayerCoefficients solve_finite_player_riccati(double c1, double c2, std::optional<long> groups,
                                                     double horizon, double mesh_step = 1e-4);

struct RiccatiGap {
  long groups = 0;
  double sup_zeta = 0.0;
  double sup_phi_gap = 0.0;
  /// (c1/M) T exp(2 max|zeta| T)
  double gronwall_bound = 0.0;
};

/// Per-M distance of the finite-group coefficients to the limit ones.
std::vector<RiccatiGap> riccati_limit_gap(double c1, double c2, double horizon, double mesh_step,
                                          const std::vector<long>& groups);

}  // namespace mfcg
