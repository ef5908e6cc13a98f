#include "surfwave/lorentz.hpp"

#include <cmath>

namespace surfwave {

Permittivity permittivity(const LorentzParams& lp, double omega_hat) {
  if (omega_hat < 0.0) throw Error("permittivity: Omega must be >= 0");
  const double P2 = lp.plasma_ratio * lp.plasma_ratio;
  const double g = lp.loss_ratio;
  if (g == 0.0 && std::abs(omega_hat - 1.0) < 1e-14 && P2 != 0.0)
    throw ResonancePole("Lorentz resonance at Omega = 1 with Gamma = 0");
  const double a = 1.0 - omega_hat * omega_hat;
  const double og = omega_hat * g;
  const double D = a * a + og * og;
  const double er = P2 == 0.0 ? 1.0 : 1.0 + P2 * a / D;
  const double s = P2 == 0.0 || og == 0.0 ? 0.0 : -P2 * og / D;
  return {cplx(er, s), er, s};
}

cplx permittivity_compact(const LorentzParams& lp, double omega_hat) {
  const double P2 = lp.plasma_ratio * lp.plasma_ratio;
  if (P2 == 0.0) return 1.0;
  return 1.0 + P2 / cplx(1.0 - omega_hat * omega_hat, omega_hat * lp.loss_ratio);
}

cplx alpha_l_from(cplx eps_l, double mu_l, const WaveCoordinates& w, double rho) {
  const double wr = w.omega_hat * rho;
  return principal_sqrt(w.k_hat * w.k_hat - wr * wr * mu_l * eps_l);
}

cplx alpha_l(const LorentzParams& lp, const WaveCoordinates& w, double rho) {
  return alpha_l_from(permittivity(lp, w.omega_hat).value, lp.mu_rel, w, rho);
}

cplx chi_l(const LorentzParams& lp, const WaveCoordinates& w, double rho) {
  return alpha_l(lp, w, rho) / w.k_hat;
}

cplx lorentz_factor(const LorentzParams& lp, cplx eps_l, Polarization pol) {
  return pol == Polarization::TE ? eps_l : cplx(-lp.mu_rel);
}

cplx impedance_te(const LorentzParams& lp, const WaveCoordinates& w, double rho) {
  const cplx eps = permittivity(lp, w.omega_hat).value;
  if (std::abs(eps) < kPoleTol) throw ZeroPermittivity("eps_L vanishes");
  return alpha_l_from(eps, lp.mu_rel, w, rho) / w.k_hat / eps;
}

cplx impedance_tm(const LorentzParams& lp, const WaveCoordinates& w, double rho) {
  const cplx chi = chi_l(lp, w, rho);
  if (std::abs(chi) < kPoleTol) throw BranchPoint("chi_L vanishes");
  return lp.mu_rel / chi;
}

ClassicalLimit classical_limit_error(const LorentzParams& lp, const WaveCoordinates& w, double rho) {
  const cplx eps = permittivity(lp, w.omega_hat).value;
  if (std::abs(eps) < kPoleTol) throw ZeroPermittivity("eps_L vanishes");
  const double wr = w.omega_hat * rho;
  const cplx alpha = alpha_l_from(eps, lp.mu_rel, w, rho);
  ClassicalLimit out;
  out.generalized = -kI * alpha / (wr * eps);
  out.classical = principal_sqrt(lp.mu_rel / eps);
  out.relative_error = std::abs(out.generalized - out.classical) / std::abs(out.classical);
  out.small_parameter = std::abs(w.k_hat * w.k_hat / (wr * wr * eps));
  return out;
}

}  // namespace surfwave
