#include <doctest.h>

#include <cmath>

#include "mfcg/rates.hpp"

using namespace mfcg;

TEST_SUITE("rates") {

TEST_CASE("visit-count rate") {
  CHECK(rho_q_infinite(0, 0.55) == 1.0);
  CHECK(rho_q_infinite(99, 0.55) == doctest::Approx(0.0794328).epsilon(1e-5));
  CHECK(rho_q_infinite(9, 1.0) == doctest::Approx(0.1));
  for (std::uint64_t v = 0; v < 1000; ++v) CHECK(rho_q_infinite(v + 1, 0.55) < rho_q_infinite(v, 0.55));
}

TEST_CASE("finite-horizon visit-count rate") {
  CHECK(rho_q_finite(0, 16, 0.55) == 1.0);
  CHECK(rho_q_finite(1, 16, 0.55) == doctest::Approx(0.2105005).epsilon(1e-6));
  for (std::uint64_t v : {0u, 3u, 17u, 1000u}) CHECK(rho_q_finite(v, 1, 0.7) == rho_q_infinite(v, 0.7));
}

TEST_CASE("episode rate") {
  CHECK(rho_episode(0, 0.85) == 1.0);
  CHECK(std::abs(rho_episode(9, 0.85) - 0.14125375) < 1e-5);
  CHECK(std::abs(rho_episode(9, 0.15) - 0.70794578) < 1e-5);
}

TEST_CASE("well-posed exponents order the three rates for every episode") {
  const RateExponents e{0.85, 0.55, 0.15};
  REQUIRE(validate_exponents(e).ok);
  for (std::uint64_t k = 1; k < 100000; k = k * 3 + 1) {
    const double mu = rho_episode(k, e.omega_mu);
    const double q = rho_episode(k, e.omega_q);
    const double mu_tilde = rho_episode(k, e.omega_mu_tilde);
    CHECK(mu < q);
    CHECK(q < mu_tilde);
    CHECK(mu > 0.0);
    CHECK(mu_tilde <= 1.0);
  }
}

TEST_CASE("misspecified exponents are diagnosed") {
  const auto local_too_slow = validate_exponents({0.85, 0.55, 0.85});
  CHECK_FALSE(local_too_slow.ok);
  REQUIRE(local_too_slow.violations.size() == 1);
  CHECK(local_too_slow.violations[0].find("omega_mu_tilde >= omega_q") != std::string::npos);

  const auto global_too_fast = validate_exponents({0.15, 0.55, 0.15});
  CHECK_FALSE(global_too_fast.ok);
  REQUIRE(global_too_fast.violations.size() == 1);
  CHECK(global_too_fast.diagnostic().find("omega_mu <= omega_q") != std::string::npos);

  const auto both = validate_exponents({0.15, 0.55, 0.85});
  CHECK(both.violations.size() == 2);
  CHECK(both.diagnostic().find("omega_mu_tilde >= omega_q") != std::string::npos);

  CHECK_FALSE(validate_exponents({0.95, 0.45, 0.15}).ok);
  CHECK_FALSE(validate_exponents({1.2, 1.0, 0.15}).ok);
}

TEST_CASE("Robbins-Monro conditions hold exactly for omega in (0.5, 1]") {
  // sum (1+k)^-w diverges iff w <= 1; sum (1+k)^-2w converges iff 2w > 1
  for (double w : {0.51, 0.55, 0.85, 0.99}) {
    CHECK(w <= 1.0);
    CHECK(2.0 * w > 1.0);
  }
}

}  // TEST_SUITE
