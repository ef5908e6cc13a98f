#pragma once

#include "surfwave/core.hpp"

// Interface residual. With f the material factors (eps for TE, -mu for TM) and
// zeta = chi_L / f_L,
//   R = [chi_A f_B/(chi_B f_A) - chi_B f_A/(chi_A f_B)] S_A S_B
//     + [zeta f_A/chi_A - chi_A/(f_A zeta)] S_A C_B
//     + [zeta f_B/chi_B - chi_B/(f_B zeta)] S_B C_A,
// S = sinh(chi k t), C = cosh(chi k t). R vanishes exactly when (-i zeta, 1) is an
// eigenvector of the monodromy matrix. It is evaluated with S/chi folded into
// sinh(z)/z, so chi_A = 0 and chi_B = 0 are regular points; only chi_L = 0 and
// f_L = 0 are poles.

namespace surfwave {

struct ResidualValue {
  cplx value;     // shares the factor exp(log_scale) with scale
  double re = 0.0;
  double im = 0.0;
  double scale = 1.0;  // largest |term|
  double log_scale = 0.0;
  cplx chi_a, chi_b, chi_l;

  cplx scaled() const { return value / scale; }
  double scaled_norm() const { return std::abs(value) / scale; }
};

struct Admissibility {
  bool decay_lorentz = false;     // Re alpha_L > 0
  bool decay_stratified = false;  // |multiplier| < 1 and the period is in a gap
  cplx multiplier;
  cplx trace;
  bool admissible = false;
};

struct ResidualInputs {
  cplx chi_a, chi_b, chi_l;
  double f_a = 1.0, f_b = 1.0;
  cplx f_l;
  double k_hat = 1.0;
  double fill = 0.5;
  Polarization polarization = Polarization::TE;
};

// Throws ResonancePole from the permittivity.
ResidualInputs residual_inputs(const MediumConfig& cfg, const WaveCoordinates& w);
// Throws PoleEncountered for |chi_L| or |f_L| below 1e-14.
ResidualValue residual_from(const ResidualInputs& in);
ResidualValue residual(const MediumConfig& cfg, const WaveCoordinates& w);

Admissibility admissibility_from(const ResidualInputs& in);
Admissibility admissibility(const MediumConfig& cfg, const WaveCoordinates& w);

struct Evaluation {
  ResidualValue residual;
  Admissibility admissibility;
};
Evaluation evaluate(const MediumConfig& cfg, const WaveCoordinates& w);

// Homogeneous stratified side (A = B): closed-form v^2 = (Omega rho / k_hat)^2,
//   v^2 = (f_L^2 - f_A^2) / (f_L^2 mu_A eps_A - f_A^2 mu_L eps_L),
// which for TE is (eps_L/eps_A - eps_A/eps_L) / (mu_A eps_L - mu_L eps_A).
// Throws DegenerateDenominator when the denominator vanishes.
cplx homogeneous_velocity_sq(const LayerParams& a, cplx eps_l, double mu_l, Polarization pol = Polarization::TE);
// Requires layer_a == layer_b.
cplx homogeneous_dispersion(const MediumConfig& cfg, double omega_hat);

// omega/(k c) = 1 / sqrt(eps_A mu_A (1 - mu_L eps_A / (eps_L mu_A))).
cplx babich_limit(const LayerParams& a, cplx eps_l, double mu_l);
cplx babich_limit(const MediumConfig& cfg, double omega_hat);

}  // namespace surfwave
