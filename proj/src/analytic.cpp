#include "mfcg/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace mfcg {

double AsymptoticLqSolution::gamma1_at(double m_global, double m_local) const noexcept {
  const auto& p = params;
  const double num = 2.0 * p.c5_tilde * m_local - 2.0 * p.c1_tilde * p.c2_tilde * (2.0 - p.c2_tilde) * m_local -
                     2.0 * p.c1 * p.c2 * m_global - 2.0 * p.c3 * p.c4;
  return num / (beta + 2.0 * gamma2);
}

double AsymptoticLqSolution::quadratic_residual() const noexcept {
  return beta * gamma2 + 2.0 * gamma2 * gamma2 - (params.c1 + params.c3 + params.c1_tilde);
}

double AsymptoticLqSolution::fixed_point_residual() const noexcept {
  return m_hat + gamma1_at(m_hat, m_hat) / (2.0 * gamma2);
}

AsymptoticLqSolution solve_asymptotic_lq(const LqCostParams& p, double beta, double sigma) {
  if (!(beta > 0.0)) throw DegenerateParametersError("discount rate beta must be positive");
  const double denom = p.c1 * (1.0 - p.c2) + p.c1_tilde * (1.0 - p.c2_tilde) * (1.0 - p.c2_tilde) + p.c3 + p.c5_tilde;
  if (denom == 0.0) throw DegenerateParametersError("fixed-point mean is undefined (zero denominator)");
  const double curvature = p.c1 + p.c3 + p.c1_tilde;
  const double disc = beta * beta + 8.0 * curvature;
  if (!(disc >= 0.0)) throw DegenerateParametersError("no real quadratic coefficient");

  AsymptoticLqSolution sol;
  sol.params = p;
  sol.beta = beta;
  sol.sigma = sigma;
  sol.gamma2 = (-beta + std::sqrt(disc)) / 4.0;
  if (!(sol.gamma2 > 0.0)) throw DegenerateParametersError("quadratic coefficient must be positive");
  sol.m_hat = p.c3 * p.c4 / denom;
  sol.gamma1 = sol.gamma1_at(sol.m_hat, sol.m_hat);
  sol.gamma0 = (p.c1 * p.c2 * p.c2 * sol.m_hat * sol.m_hat +
                (p.c1_tilde * p.c2_tilde * p.c2_tilde + p.c5_tilde) * sol.m_hat * sol.m_hat +
                sigma * sigma * sol.gamma2 - 0.5 * sol.gamma1 * sol.gamma1 + p.c3 * p.c4 * p.c4) /
               beta;
  sol.limit_var = sigma * sigma / (4.0 * sol.gamma2);
  return sol;
}

SimplexVector asymptotic_theory_distribution(const AsymptoticLqSolution& sol, const Grid& grid) {
  return discretize_gaussian(sol.m_hat, std::sqrt(sol.limit_var), grid);
}

TraderSolution::TraderSolution(const TraderCostParams& params, double horizon, double sigma, double x0,
                               double sigma0, double quad_step)
    : params_(params), horizon_(horizon), sigma_(sigma), x0_(x0), sigma0_(sigma0) {
  if (!(params.c_alpha > 0.0)) throw DegenerateParametersError("c_alpha must be positive");
  if (!(horizon > 0.0)) throw DegenerateParametersError("horizon must be positive");
  if (!(quad_step > 0.0)) throw DegenerateParametersError("quadrature step must be positive");
  b_ = 1.0 / params.c_alpha;
  c_ = params.c_x;
  d_ = -params.c_h / (2.0 * params.c_alpha);
  r_ = d_ * d_ + b_ * c_;
  if (!(r_ > 0.0)) throw UnsupportedParametersError("R = D^2 + BC must be positive (oscillatory regime)");
  delta_plus_ = -d_ + std::sqrt(r_);
  delta_minus_ = -d_ - std::sqrt(r_);

  const auto n = static_cast<std::size_t>(std::ceil(horizon / quad_step - 1e-9));
  mesh_step_ = horizon / static_cast<double>(n);
  int_eta_bar_.assign(n + 1, 0.0);
  int_eta_.assign(n + 1, 0.0);
  int_var_.assign(n + 1, 0.0);
  const double h = mesh_step_;
  for (std::size_t i = 1; i <= n; ++i) {
    const double t0 = h * static_cast<double>(i - 1);
    const double t1 = h * static_cast<double>(i);
    int_eta_bar_[i] = int_eta_bar_[i - 1] + 0.5 * h * (eta_bar(t0) + eta_bar(t1)) / params.c_alpha;
    int_eta_[i] = int_eta_[i - 1] + 0.5 * h * (eta(t0) + eta(t1));
    const double w0 = std::exp(2.0 * int_eta_[i - 1] / params.c_alpha);
    const double w1 = std::exp(2.0 * int_eta_[i] / params.c_alpha);
    int_var_[i] = int_var_[i - 1] + 0.5 * h * (w0 + w1);
  }
}

double TraderSolution::eta(double t) const noexcept {
  return params_.c_alpha * params_.c_g / (params_.c_alpha + params_.c_g * (horizon_ - t));
}

double TraderSolution::eta_bar(double t) const noexcept {
  const double e = std::exp((delta_plus_ - delta_minus_) * (horizon_ - t));
  const double cg = params_.c_g;
  const double num = -c_ * (e - 1.0) - cg * (delta_plus_ * e - delta_minus_);
  const double den = (delta_minus_ * e - delta_plus_) - cg * b_ * (e - 1.0);
  return num / den;
}

double TraderSolution::interpolate(const std::vector<double>& table, double t) const {
  if (!(t >= -1e-12 && t <= horizon_ + 1e-12)) throw DimensionError("time outside [0, T]");
  const double pos = std::clamp(t, 0.0, horizon_) / mesh_step_;
  const auto i = std::min(static_cast<std::size_t>(pos), table.size() - 2);
  const double w = pos - static_cast<double>(i);
  return table[i] + w * (table[i + 1] - table[i]);
}

double TraderSolution::mean_x(double t) const { return x0_ * std::exp(-interpolate(int_eta_bar_, t)); }

double TraderSolution::psi(double t) const { return (eta_bar(t) - eta(t)) * mean_x(t); }

double TraderSolution::var_x(double t) const {
  const double decay = std::exp(-2.0 * interpolate(int_eta_, t) / params_.c_alpha);
  return decay * (sigma0_ * sigma0_ + sigma_ * sigma_ * interpolate(int_var_, t));
}

double TraderSolution::control(double t, double x) const { return -(eta(t) * x + psi(t)) / params_.c_alpha; }

TraderSolution solve_trader(const TraderCostParams& params, double horizon, double sigma, double x0, double sigma0,
                            double quad_step) {
  return TraderSolution(params, horizon, sigma, x0, sigma0, quad_step);
}

SimplexVector trader_theory_distribution(const TraderSolution& sol, double t, const Grid& grid) {
  return discretize_gaussian(sol.mean_x(t), std::sqrt(sol.var_x(t)), grid);
}

double riccati_tanh_closed_form(double c, double horizon, double t) {
  const double s = std::sqrt(c);
  return s * std::tanh(s * (horizon - t));
}

FinitePlayerCoefficients solve_finite_player_riccati(double c1, double c2, std::optional<long> groups,
                                                     double horizon, double mesh_step) {
  if (!(mesh_step > 0.0)) throw DegenerateParametersError("mesh step must be positive");
  if (!(horizon > 0.0)) throw DegenerateParametersError("horizon must be positive");
  if (groups && *groups < 1) throw DegenerateParametersError("number of groups must be positive");

  const double coupling = groups ? c1 / static_cast<double>(*groups) : 0.0;
  using State = std::array<double, 3>;  // eta, phi, zeta
  // Time derivatives; integration runs in reversed time s = T - t.
  auto rhs = [&](const State& y) -> State {
    return {y[0] * y[0] - c1, y[1] * y[1] + 2.0 * y[1] * y[2] - c2 + coupling, y[2] * y[2] - coupling};
  };
  auto axpy = [](const State& y, double a, const State& k) -> State {
    return {y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2]};
  };

  const auto n = static_cast<std::size_t>(std::ceil(horizon / mesh_step - 1e-9));
  const double h = horizon / static_cast<double>(n);

  FinitePlayerCoefficients out;
  out.groups = groups;
  out.times.resize(n + 1);
  out.eta.resize(n + 1);
  out.phi.resize(n + 1);
  out.zeta.resize(n + 1);

  State y{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j <= n; ++j) {
    const std::size_t i = n - j;
    out.times[i] = h * static_cast<double>(i);
    out.eta[i] = y[0];
    out.phi[i] = y[1];
    out.zeta[i] = y[2];
    if (j == n) break;
    // dy/ds = -rhs(y)
    const State k1 = rhs(y);
    const State k2 = rhs(axpy(y, -0.5 * h, k1));
    const State k3 = rhs(axpy(y, -0.5 * h, k2));
    const State k4 = rhs(axpy(y, -h, k3));
    for (int c = 0; c < 3; ++c) y[c] -= h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    for (double v : y) {
      if (!std::isfinite(v) || std::abs(v) > 1e6) {
        throw IntegrationFailureError("Riccati solution blew up before reaching t = 0");
      }
    }
  }

  if (!groups) {
    double e_eta = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      e_eta = std::max(e_eta, std::abs(out.eta[i] - riccati_tanh_closed_form(c1, horizon, out.times[i])));
    }
    out.eta_closed_form_error = e_eta;
    if (c2 > 0.0) {
      double e_phi = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        e_phi = std::max(e_phi, std::abs(out.phi[i] - riccati_tanh_closed_form(c2, horizon, out.times[i])));
      }
      out.phi_closed_form_error = e_phi;
    }
  }
  return out;
}

std::vector<RiccatiGap> riccati_limit_gap(double c1, double c2, double horizon, double mesh_step,
                                          const std::vector<long>& groups) {
  if (groups.empty()) throw DegenerateParametersError("list of group counts is empty");
  const auto limit = solve_finite_player_riccati(c1, c2, std::nullopt, horizon, mesh_step);
  std::vector<RiccatiGap> out;
  out.reserve(groups.size());
  for (long m : groups) {
    const auto fin = solve_finite_player_riccati(c1, c2, m, horizon, mesh_step);
    RiccatiGap gap;
    gap.groups = m;
    for (std::size_t i = 0; i < fin.times.size(); ++i) {
      gap.sup_zeta = std::max(gap.sup_zeta, std::abs(fin.zeta[i]));
      gap.sup_phi_gap = std::max(gap.sup_phi_gap, std::abs(fin.phi[i] - limit.phi[i]));
    }
    gap.gronwall_bound = c1 / static_cast<double>(m) * horizon * std::exp(2.0 * gap.sup_zeta * horizon);
    out.push_back(gap);
  }
  return out;
}

}  // namespace mfcg
