#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mfcg {

/// Decay exponents of the three learning rates: global distribution,
/// Q-table and local distribution. A well-posed triplet satisfies
/// omega_mu > omega_q > omega_mu_tilde with omega_q in (0.5, 1).
struct RateExponents {
  double omega_mu = 0.85;
  double omega_q = 0.55;
  double omega_mu_tilde = 0.15;
};

/// 1 / (1 + visits)^omega_q
double rho_q_infinite(std::uint64_t visits, double omega_q);

/// 1 / (1 + horizon_steps * visits)^omega_q, visits counted per time step.
double rho_q_finite(std::uint64_t visits, std::uint64_t horizon_steps, double omega_q);

/// 1 / (1 + k)^omega with the episode index k starting at 0.
double rho_episode(std::uint64_t k, double omega);

struct RateCheck {
  bool ok = true;
  std::vector<std::string> violations;

  std::string diagnostic() const;
};

RateCheck validate_exponents(const RateExponents& e);

}  // namespace mfcg
