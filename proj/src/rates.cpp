#include "mfcg/rates.hpp"

#include <cmath>

namespace mfcg {

double rho_q_infinite(std::uint64_t visits, double omega_q) {
  return std::pow(1.0 + static_cast<double>(visits), -omega_q);
}

double rho_q_finite(std::uint64_t visits, std::uint64_t horizon_steps, double omega_q) {
  return std::pow(1.0 + static_cast<double>(horizon_steps) * static_cast<double>(visits), -omega_q);
}

double rho_episode(std::uint64_t k, double omega) {
  return std::pow(1.0 + static_cast<double>(k), -omega);
}

std::string RateCheck::diagnostic() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v;
  }
  return out;
}

RateCheck validate_exponents(const RateExponents& e) {
  RateCheck check;
  auto fail = [&](std::string msg) {
    check.ok = false;
    check.violations.push_back(std::move(msg));
  };
  if (!(e.omega_mu > e.omega_q)) fail("omega_mu <= omega_q (global distribution not slower than Q)");
  if (!(e.omega_q > e.omega_mu_tilde)) fail("omega_mu_tilde >= omega_q (local distribution not faster than Q)");
  if (!(e.omega_q > 0.5 && e.omega_q < 1.0)) fail("omega_q outside (0.5, 1)");
  return check;
}

}  // namespace mfcg
