#pragma once

// Reference computations shared by the unit and acceptance suites. Nothing
// here calls into the code paths it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

/// Two-sided binomial band: |count - n p| <= k sqrt(n p (1 - p)).
inline bool within_binomial(std::size_t count, std::size_t n, double p, double k = 4.0) {
  const double mean = static_cast<double>(n) * p;
  const double sd = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
  return std::abs(static_cast<double>(count) - mean) <= k * sd;
}

/// Exhaustive search over all action sequences of a deterministic chain.
/// next(x, a), cost(t, x, a) and terminal(x) describe the chain; returns the
/// optimal cost-to-go from x at time t and the first action achieving it
/// (lowest index on ties).
template <typename Next, typename Cost, typename Terminal>
std::pair<double, std::size_t> enumerate_best(std::size_t x, std::size_t t, std::size_t horizon, std::size_t actions,
                                              const Next& next, const Cost& cost, const Terminal& terminal) {
  if (t == horizon) return {terminal(x), 0};
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_a = 0;
  for (std::size_t a = 0; a < actions; ++a) {
    const double v = cost(t, x, a) + enumerate_best(next(x, a), t + 1, horizon, actions, next, cost, terminal).first;
    if (v < best) {
      best = v;
      best_a = a;
    }
  }
  return {best, best_a};
}

/// Backward RK4 for y' = f(y) on [0, T] from y(T) = y_T, returning y(0).
template <typename F>
double rk4_backward(const F& f, double y_terminal, double horizon, std::size_t steps) {
  const double h = horizon / static_cast<double>(steps);
  double y = y_terminal;
  for (std::size_t i = 0; i < steps; ++i) {
    const double k1 = f(y);
    const double k2 = f(y - 0.5 * h * k1);
    const double k3 = f(y - 0.5 * h * k2);
    const double k4 = f(y - h * k3);
    y -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

/// Tabulated eta_bar of the trader problem by RK4 on its Riccati equation
/// eta_bar' = eta_bar^2 / c_alpha - (c_h / c_alpha) eta_bar - c_x, eta_bar(T) = c_g.
/// Entry i holds eta_bar(i * T / steps).
inline std::vector<double> trader_eta_bar_table(double c_alpha, double c_x, double c_h, double c_g, double horizon,
                                                std::size_t steps) {
  auto f = [&](double e) { return e * e / c_alpha - (c_h / c_alpha) * e - c_x; };
  std::vector<double> out(steps + 1);
  const double h = horizon / static_cast<double>(steps);
  double y = c_g;
  out[steps] = y;
  for (std::size_t i = steps; i-- > 0;) {
    const double k1 = f(y);
    const double k2 = f(y - 0.5 * h * k1);
    const double k3 = f(y - 0.5 * h * k2);
    const double k4 = f(y - h * k3);
    y -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out[i] = y;
  }
  return out;
}

struct PathMoments {
  double mean = 0.0;
  double var = 0.0;
  double var_stderr = 0.0;
};

/// Euler-Maruyama simulation of the optimally controlled trader inventory
/// dX = -(eta X + (eta_bar - eta) E[X]) / c_alpha dt + sigma dW, with E[X]
/// taken as the empirical mean across paths. Returns moments at each
/// requested step index.
inline std::vector<PathMoments> simulate_trader_paths(double c_alpha, double c_x, double c_h, double c_g, double horizon,
                                                      double sigma, double x0, double sigma0, std::size_t steps,
                                                      std::size_t paths, const std::vector<std::size_t>& report_at,
                                                      std::uint64_t seed) {
  const auto eta_bar = trader_eta_bar_table(c_alpha, c_x, c_h, c_g, horizon, steps);
  const double h = horizon / static_cast<double>(steps);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> x(paths);
  for (auto& v : x) v = x0 + sigma0 * z(gen);
  auto moments = [&] {
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(paths);
    double s2 = 0.0, s4 = 0.0;
    for (double v : x) {
      const double d = (v - m) * (v - m);
      s2 += d;
      s4 += d * d;
    }
    const double n = static_cast<double>(paths);
    const double var = s2 / (n - 1.0);
    const double m4 = s4 / n;
    return PathMoments{m, var, std::sqrt(std::max(0.0, (m4 - var * var) / n))};
  };
  std::vector<PathMoments> out;
  for (std::size_t i = 0; i <= steps; ++i) {
    if (std::find(report_at.begin(), report_at.end(), i) != report_at.end()) out.push_back(moments());
    if (i == steps) break;
    const double t = static_cast<double>(i) * h;
    const double eta = c_alpha * c_g / (c_alpha + c_g * (horizon - t));
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(paths);
    const double shift = (eta_bar[i] - eta) * mean;
    const double noise = sigma * std::sqrt(h);
    for (auto& v : x) v += -(eta * v + shift) / c_alpha * h + noise * z(gen);
  }
  return out;
}

}  // namespace oracle
