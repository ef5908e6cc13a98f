#pragma once

#include "surfwave/core.hpp"

// Lorentz half-space x3 < 0.
//
// Sign convention: the loss term enters with the sign of the source model, so
// Im eps_L < 0 for Gamma > 0 (sigma is negative).
//
// Impedance units. With eta0 = sqrt(mu0/eps0) and v = Omega rho / k_hat, the
// dimensional boundary relations are
//   TE:  E1(0) = -i alpha_L/(omega eps_L eps0) H2(0) = -i eta0 (zeta_te / v) H2(0)
//   TM:  E2(0) = -i omega mu_L mu0/alpha_L H1(0)    = -i eta0 (v zeta_tm) H1(0)
// The TE sign follows from substituting the decaying solution into the field
// equations of the lower half-space; the TM sign follows by the same check.

namespace surfwave {

struct Permittivity {
  cplx value;              // eps_r + i sigma/omega
  double real_part;        // eps_r
  double loss_over_omega;  // sigma/omega
};

// Component form. Throws ResonancePole for Gamma = 0 and |Omega - 1| < 1e-14.
Permittivity permittivity(const LorentzParams& lp, double omega_hat);
// Compact form 1 + P^2/((1 - Omega^2) + i Omega Gamma).
cplx permittivity_compact(const LorentzParams& lp, double omega_hat);

// d alpha_L = sqrt(k_hat^2 - (Omega rho)^2 eps_L mu_L), principal branch.
cplx alpha_l(const LorentzParams& lp, const WaveCoordinates& w, double rho);
cplx alpha_l_from(cplx eps_l, double mu_l, const WaveCoordinates& w, double rho);
// chi_L = d alpha_L / k_hat (slaved to the alpha_L branch).
cplx chi_l(const LorentzParams& lp, const WaveCoordinates& w, double rho);

// Lorentz-side material factor: eps_L for TE, -mu_L for TM.
cplx lorentz_factor(const LorentzParams& lp, cplx eps_l, Polarization pol);

// zeta_te = chi_L / eps_L. Throws ZeroPermittivity when |eps_L| < 1e-14.
cplx impedance_te(const LorentzParams& lp, const WaveCoordinates& w, double rho);
// zeta_tm = mu_L / chi_L. Throws BranchPoint when |chi_L| < 1e-14.
cplx impedance_tm(const LorentzParams& lp, const WaveCoordinates& w, double rho);

struct ClassicalLimit {
  cplx generalized;  // -i alpha_L c/(omega eps_L) = Z_gen / eta0
  cplx classical;    // sqrt(mu_L / eps_L) = Z_classical / eta0
  double relative_error;
  double small_parameter;  // |k_hat^2 / ((Omega rho)^2 eps_L)|
};

ClassicalLimit classical_limit_error(const LorentzParams& lp, const WaveCoordinates& w, double rho);

}  // namespace surfwave
