#include <doctest.h>

#include <cmath>

#include "mfcg/analytic.hpp"
#include "oracles.hpp"

using namespace mfcg;

namespace {

const LqCostParams kLq{};  // c1=0.5 c2=1.5 c3=0.5 c4=0.25 c1~=0.3 c2~=1.25 c5~=0.25
const TraderCostParams kTrader{};  // c_alpha=1 c_x=0.75 c_h=1.25 c_g=1

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("asymptotic linear-quadratic coefficients") {
  const auto sol = solve_asymptotic_lq(kLq, 1.0, 0.5);
  // (-1 + sqrt(1 + 8 * 1.3)) / 4
  CHECK(sol.gamma2 == doctest::Approx(0.5940971508).epsilon(1e-9));
  CHECK(std::abs(sol.m_hat - 0.2409638554) < 1e-6);
  CHECK(std::abs(sol.limit_var - 0.105206) < 1e-5);
  CHECK(std::abs(sol.quadratic_residual()) <= 1e-12);
  CHECK(std::abs(sol.fixed_point_residual()) <= 1e-10);
  CHECK(sol.control(sol.m_hat) == doctest::Approx(0.0));
}

TEST_CASE("asymptotic solution with a centred target") {
  LqCostParams p = kLq;
  p.c4 = 0.0;
  const auto sol = solve_asymptotic_lq(p, 1.0, 0.5);
  CHECK(sol.m_hat == 0.0);
  for (double x : {-1.0, 0.3, 2.0}) CHECK(sol.control(x) == doctest::Approx(-2.0 * sol.gamma2 * x));
}

TEST_CASE("asymptotic residuals over a parameter sweep") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int i = 0; i < 200; ++i) {
    const LqCostParams p{u(gen), u(gen), u(gen), u(gen), u(gen), u(gen), u(gen)};
    AsymptoticLqSolution sol;
    try {
      sol = solve_asymptotic_lq(p, u(gen), u(gen));
    } catch (const DegenerateParametersError&) {
      continue;
    }
    CHECK(std::abs(sol.quadratic_residual()) <= 1e-12);
    CHECK(std::abs(sol.fixed_point_residual()) <= 1e-10 * std::max(1.0, std::abs(sol.m_hat)));
    CHECK(sol.control(sol.m_hat) == doctest::Approx(0.0));
  }
}

TEST_CASE("asymptotic solver rejects degenerate inputs") {
  CHECK_THROWS_AS(solve_asymptotic_lq(kLq, 0.0, 0.5), DegenerateParametersError);
  // c1 (1 - c2) + c1~ (1 - c2~)^2 + c3 + c5~ = 0
  const LqCostParams zero_denominator{1.0, 2.0, 0.5, 0.25, 0.5, 1.0, 0.5};
  CHECK_THROWS_AS(solve_asymptotic_lq(zero_denominator, 1.0, 0.5), DegenerateParametersError);
}

TEST_CASE("asymptotic limit law on the grid") {
  const auto sol = solve_asymptotic_lq(kLq, 1.0, 0.5);
  const Grid g = Grid::from_bounds(-1.75, 2.25, 0.1);
  const auto dist = asymptotic_theory_distribution(sol, g);
  CHECK(dist.on_simplex());
  CHECK(std::abs(mean_of(dist, g) - sol.m_hat) <= g.step());
  const auto m = dist.mass();
  CHECK(static_cast<std::size_t>(std::max_element(m.begin(), m.end()) - m.begin()) == g.project(sol.m_hat));
}

TEST_CASE("trader coefficients") {
  const auto sol = solve_trader(kTrader, 1.0, 0.75, 1.0, 0.5);
  CHECK(sol.eta(0.0) == doctest::Approx(0.5));
  CHECK(std::abs(sol.eta(1.0) - 1.0) <= 1e-12);
  CHECK(std::abs(sol.eta_bar(1.0) - 1.0) <= 1e-12);
  CHECK(std::abs(sol.delta_plus() - 1.69300) < 1e-4);
  CHECK(std::abs(sol.delta_minus() + 0.44300) < 1e-4);
  CHECK(std::abs(sol.eta_bar(0.0) - 1.578) < 0.002);
  CHECK(sol.var_x(0.0) == doctest::Approx(0.25));
  CHECK(sol.mean_x(0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(sol.mean_x(1.5), DimensionError);
}

TEST_CASE("trader eta_bar agrees with an RK4 solution of its Riccati equation") {
  const auto sol = solve_trader(kTrader, 1.0, 0.75, 1.0, 0.5);
  const auto table = oracle::trader_eta_bar_table(1.0, 0.75, 1.25, 1.0, 1.0, 1000);
  for (std::size_t i = 0; i <= 1000; i += 50) CHECK(std::abs(sol.eta_bar(i * 1e-3) - table[i]) < 1e-9);
}

TEST_CASE("trader terminal conditions for other parameters") {
  for (double cg : {0.5, 2.0, 3.0}) {
    const TraderCostParams p{1.5, 0.4, 0.8, cg};
    const auto sol = solve_trader(p, 2.0, 0.5, 0.3, 0.2);
    CHECK(std::abs(sol.eta(2.0) - cg) <= 1e-12);
    CHECK(std::abs(sol.eta_bar(2.0) - cg) <= 1e-12);
  }
}

TEST_CASE("zero initial inventory removes the intercept") {
  const auto sol = solve_trader(kTrader, 1.0, 0.75, 0.0, 0.5);
  for (double t : {0.0, 0.3, 0.77, 1.0}) {
    CHECK(sol.mean_x(t) == 0.0);
    CHECK(sol.psi(t) == 0.0);
    CHECK(sol.control(t, 0.8) == doctest::Approx(-sol.eta(t) * 0.8));
  }
}

TEST_CASE("trader eta matches its ODE by finite differences") {
  const auto sol = solve_trader(kTrader, 1.0, 0.75, 1.0, 0.5);
  // eta' = eta^2 / c_alpha
  const double h = 1e-4;
  for (double t : {0.1, 0.4, 0.8}) {
    const double deriv = (sol.eta(t + h) - sol.eta(t - h)) / (2.0 * h);
    CHECK(deriv == doctest::Approx(sol.eta(t) * sol.eta(t)).epsilon(1e-6));
  }
}

TEST_CASE("trader mean matches forward Euler of its ODE") {
  const auto sol = solve_trader(kTrader, 1.0, 0.75, 1.0, 0.5);
  const auto eta_bar = oracle::trader_eta_bar_table(1.0, 0.75, 1.25, 1.0, 1.0, 10000);
  double m = 1.0;
  const double h = 1e-4;
  for (std::size_t i = 0; i < 10000; ++i) m -= eta_bar[i] * m * h;
  CHECK(std::abs(sol.mean_x(1.0) - m) < 1e-3);
}

TEST_CASE("trader variance agrees with Euler-Maruyama paths") {
  const auto sol = solve_trader(kTrader, 1.0, 0.75, 1.0, 0.5);
  const std::size_t steps = 1000;
  const std::vector<std::size_t> at{250, 500, 1000};
  const auto sims = oracle::simulate_trader_paths(1.0, 0.75, 1.25, 1.0, 1.0, 0.75, 1.0, 0.5, steps, 100000, at, 31);
  for (std::size_t i = 0; i < at.size(); ++i) {
    const double t = static_cast<double>(at[i]) / steps;
    CHECK(sol.var_x(t) >= 0.0);
    CHECK(std::abs(sol.var_x(t) - sims[i].var) <= 3.0 * sims[i].var_stderr);
  }
}

TEST_CASE("trader theory distribution at the start") {
  const auto sol = solve_trader(kTrader, 1.0, 0.75, 1.0, 0.5);
  const Grid g = Grid::from_bounds(-2.0, 2.5, 0.25);
  const auto d = trader_theory_distribution(sol, 0.0, g);
  CHECK(d.on_simplex());
  CHECK(std::abs(mean_of(d, g) - 1.0) <= g.step());
}

TEST_CASE("trader rejects the oscillatory regime") {
  // R = c_h^2 / (4 c_alpha^2) + c_x / c_alpha <= 0 needs c_x < 0
  CHECK_THROWS_AS(solve_trader({1.0, -1.0, 0.5, 1.0}, 1.0, 0.5, 0.0, 0.5), UnsupportedParametersError);
  CHECK_THROWS_AS(solve_trader({0.0, 1.0, 0.5, 1.0}, 1.0, 0.5, 0.0, 0.5), DegenerateParametersError);
}

TEST_CASE("Riccati system terminal values and the limit case") {
  const auto fin = solve_finite_player_riccati(0.5, 0.25, 10, 1.0);
  CHECK(fin.eta.back() == 0.0);
  CHECK(fin.phi.back() == 0.0);
  CHECK(fin.zeta.back() == 0.0);
  CHECK(fin.times.front() == 0.0);
  CHECK(fin.times.back() == doctest::Approx(1.0));

  const auto lim = solve_finite_player_riccati(0.5, 0.25, std::nullopt, 1.0);
  REQUIRE(lim.eta_closed_form_error.has_value());
  CHECK(*lim.eta_closed_form_error <= 1e-8);
  REQUIRE(lim.phi_closed_form_error.has_value());
  CHECK(*lim.phi_closed_form_error <= 1e-8);
  CHECK(std::abs(lim.eta.front() - riccati_tanh_closed_form(0.5, 1.0, 0.0)) <= 1e-8);
  for (double z : lim.zeta) CHECK(z == 0.0);
}

TEST_CASE("RK4 converges at fourth order") {
  const double exact = riccati_tanh_closed_form(0.5, 1.0, 0.0);
  const double coarse = std::abs(solve_finite_player_riccati(0.5, 0.25, std::nullopt, 1.0, 0.1).eta.front() - exact);
  const double fine = std::abs(solve_finite_player_riccati(0.5, 0.25, std::nullopt, 1.0, 0.05).eta.front() - exact);
  REQUIRE(fine > 0.0);
  CHECK(std::log2(coarse / fine) >= 3.5);
  // independent RK4 on the same equation
  const double ref = oracle::rk4_backward([](double y) { return y * y - 0.5; }, 0.0, 1.0, 10);
  CHECK(solve_finite_player_riccati(0.5, 0.25, std::nullopt, 1.0, 0.1).eta.front() == doctest::Approx(ref));
}

TEST_CASE("Riccati gaps shrink like 1/M and obey the Gronwall bound") {
  const auto gaps = riccati_limit_gap(0.5, 0.25, 1.0, 1e-3, {10, 20, 100, 1000});
  REQUIRE(gaps.size() == 4);
  CHECK(gaps[2].sup_zeta < gaps[0].sup_zeta);
  CHECK(gaps[3].sup_zeta < gaps[2].sup_zeta);
  CHECK(gaps[2].sup_phi_gap < gaps[0].sup_phi_gap);
  CHECK(gaps[3].sup_phi_gap < gaps[2].sup_phi_gap);
  const double ratio = gaps[0].sup_zeta / gaps[1].sup_zeta;
  CHECK(ratio >= 1.5);
  CHECK(ratio <= 2.5);
  for (const auto& g : gaps) CHECK(g.sup_zeta <= g.gronwall_bound);
  CHECK_THROWS_AS(riccati_limit_gap(0.5, 0.25, 1.0, 1e-3, {}), DegenerateParametersError);
}

TEST_CASE("Riccati blow-up is reported") {
  // y' = y^2 + c with c > 0 backward from 0 escapes in finite time
  CHECK_THROWS_AS(solve_finite_player_riccati(-4.0, 0.25, std::nullopt, 5.0, 1e-3), IntegrationFailureError);
  CHECK_THROWS_AS(solve_finite_player_riccati(0.5, 0.25, 0L, 1.0), DegenerateParametersError);
}

}  // TEST_SUITE
