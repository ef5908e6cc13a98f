#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "surfwave/core.hpp"

// Stratified half-space x3 > 0: layer A on [p, p + h), layer B on [p + h, p + 1)
// for every period p, lengths in units of d.
//
// State vector u = (e, H2) with e = v E1 / eta0 (v = Omega rho / k_hat). In these
// units the layer system reads du/ds = k_hat [[0, -i chi^2/f], [i f, 0]] u with
// s = x3/d and f the material factor (eps_rel for TE, -mu_rel for TM, the
// substitution eps -> -mu). For TM the same vector holds (H1, E2) scaled alike.

namespace surfwave {

// eps_rel for TE, -mu_rel for TM.
double layer_factor(const LayerParams& layer, Polarization pol);

struct LayerPropagator {
  ComplexMat2 matrix;  // true propagator = exp(log_scale) * matrix
  cplx chi;
  double thickness_hat = 0.0;
  double log_scale = 0.0;  // nonzero only when |Re chi k_hat t| > 300

  ComplexMat2 unscaled() const;
};

// Generator A (per unit x3/d) of the layer system.
ComplexMat2 layer_generator(const LayerParams& layer, const WaveCoordinates& w, double rho,
                            Polarization pol = Polarization::TE);

LayerPropagator layer_propagator(const LayerParams& layer, const WaveCoordinates& w, double rho,
                                 double thickness_hat, Polarization pol = Polarization::TE);

enum class Regime { Gap, Band, Degenerate };
const char* to_string(Regime r);

// Regime from the trace: Gap if |tr| > 2 + tau, Band if |tr| < 2 - tau with real trace.
Regime classify_trace(cplx trace, double tau = kTauEig);

struct Monodromy {
  ComplexMat2 matrix;  // true monodromy = exp(log_scale) * matrix
  double log_scale = 0.0;
  std::array<cplx, 2> eigenvalues;
  std::array<CVec2, 2> eigenvectors;
  Regime regime = Regime::Degenerate;

  ComplexMat2 eigenvector_matrix() const { return ComplexMat2::from_columns(eigenvectors[0], eigenvectors[1]); }
};

// B(1-h) * A(h) without eigen-decomposition; never throws.
ComplexMat2 monodromy_matrix(const MediumConfig& cfg, const WaveCoordinates& w);
// Product construction, eigen-decomposed. Throws DegenerateSpectrum at band edges.
Monodromy monodromy_product(const MediumConfig& cfg, const WaveCoordinates& w);
// Entries as printed in the closed form. Throws ChiZero when |chi_A| or |chi_B| < 1e-14.
ComplexMat2 monodromy_closed_form(const MediumConfig& cfg, const WaveCoordinates& w);

// Phi(x) by direct layer-by-layer propagation from 0 to x >= 0 (units of d).
ComplexMat2 fundamental_matrix(const MediumConfig& cfg, const WaveCoordinates& w, double x);

struct FloquetSample {
  double x;
  ComplexMat2 psi;  // periodic factor Psi~(x)
};

struct FloquetFactorization {
  Monodromy monodromy;
  std::array<cplx, 2> exponents;  // principal ln(lambda_i), per period
  std::vector<FloquetSample> samples;  // Psi~(x) = Phi(x) T diag(exp(-x ln lambda_i))
};

FloquetFactorization floquet_factorize(const MediumConfig& cfg, const WaveCoordinates& w,
                                       std::span<const double> x_grid);
// Periodic factor on the base period: Psi~(r) = Phi(r) T diag(exp(-r ln lambda_i)), r in [0, 1).
ComplexMat2 floquet_periodic_factor(const MediumConfig& cfg, const WaveCoordinates& w,
                                    const FloquetFactorization& f, double r);
// Phi(x) = Psi~(frac x) diag(exp(x ln lambda_i)) T^-1, using only the base period.
ComplexMat2 floquet_reconstruct(const MediumConfig& cfg, const WaveCoordinates& w,
                                const FloquetFactorization& f, double x);

struct ProfileSample {
  double x;  // x3 / d
  cplx e1;   // scaled, see header comment
  cplx h2;
};

struct FieldProfile {
  std::vector<ProfileSample> samples;
  WaveCoordinates wave;
  Polarization polarization = Polarization::TE;
};

// Decaying Floquet mode over [0, n_periods]; each layer sampled at
// samples_per_layer points including both ends, so interfaces appear twice.
// Period starts come from lambda_1^p U(0), interiors from layer propagation.
FieldProfile stratified_profile(const MediumConfig& cfg, const WaveCoordinates& w, int n_periods,
                                int samples_per_layer);

// exp(alpha x) (-i zeta, 1) over [-depth, 0], ascending x.
FieldProfile lorentz_profile(const MediumConfig& cfg, const WaveCoordinates& w, double depth, int samples);

// Lorentz side followed by the stratified side; x = 0 appears once from each.
FieldProfile two_sided_profile(const MediumConfig& cfg, const WaveCoordinates& w, int n_periods,
                               int samples_per_layer, double depth, int lorentz_samples);

void write_profile_csv(std::ostream& os, const FieldProfile& p);

}  // namespace surfwave
