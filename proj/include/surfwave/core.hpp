#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "surfwave/errors.hpp"

namespace surfwave {

using cplx = std::complex<double>;
using CVec2 = std::array<cplx, 2>;

inline constexpr cplx kI{0.0, 1.0};

// Relative tolerance separating distinct eigenvalues from a band edge.
inline constexpr double kTauEig = 1e-10;
// Absolute tolerance on every ratio denominator (poles, branch points).
inline constexpr double kPoleTol = 1e-14;

struct LorentzParams {
  double plasma_ratio = 2.13;  // P = omega_p / omega_0
  double loss_ratio = 0.0;     // Gamma = gamma / omega_0
  double mu_rel = 1.0;         // mu_L
};

struct LayerParams {
  double eps_rel = 1.0;
  double mu_rel = 1.0;
};

enum class Polarization { TE, TM };

std::string to_string(Polarization p);
Polarization polarization_from_string(const std::string& s);

struct MediumConfig {
  LayerParams layer_a{5.0, 1.0};
  LayerParams layer_b{10.0, 1.0};
  double fill = 0.5;  // h, thickness of A as a fraction of the period d
  double rho = 1.0;   // omega_0 d / c
  LorentzParams lorentz{};
  Polarization polarization = Polarization::TE;
};

// Human-readable list of violated invariants; empty when the config is valid.
std::vector<std::string> config_violations(const MediumConfig& cfg);
// Throws ConfigError listing every violation.
void validate_config(const MediumConfig& cfg);

struct WaveCoordinates {
  double k_hat = 1.0;      // d k
  double omega_hat = 1.0;  // omega / omega_0

  // v = omega_hat * rho / k_hat, the phase velocity in units of c.
  double phase_velocity(double rho) const { return omega_hat * rho / k_hat; }
};

struct ComplexMat2 {
  cplx m11{1.0}, m12{0.0}, m21{0.0}, m22{1.0};

  static ComplexMat2 identity() { return {}; }
  static ComplexMat2 from_columns(const CVec2& c1, const CVec2& c2) {
    return {c1[0], c2[0], c1[1], c2[1]};
  }

  cplx trace() const { return m11 + m22; }
  cplx det() const { return m11 * m22 - m12 * m21; }
  double frobenius() const;
  ComplexMat2 inverse() const;
  CVec2 column(int j) const { return j == 0 ? CVec2{m11, m21} : CVec2{m12, m22}; }

  ComplexMat2 operator*(const ComplexMat2& o) const;
  CVec2 operator*(const CVec2& v) const;
  ComplexMat2 operator+(const ComplexMat2& o) const;
  ComplexMat2 operator-(const ComplexMat2& o) const;
  ComplexMat2 operator*(cplx s) const;
};

double norm(const CVec2& v);

struct EigenDecomposition {
  std::array<cplx, 2> values;
  std::array<CVec2, 2> vectors;  // unit 2-norm, largest component real positive

  ComplexMat2 vector_matrix() const { return ComplexMat2::from_columns(vectors[0], vectors[1]); }
};

// Closed-form 2x2 eigenpairs, ascending modulus, ties by ascending argument.
EigenDecomposition eigen_decompose(const ComplexMat2& m, double tau = kTauEig);

// sqrt with arg in (-pi/2, pi/2]; a signed-zero imaginary part is treated as +0.
cplx principal_sqrt(cplx z);

// chi = sqrt(1 - (Omega rho / k_hat)^2 mu eps), principal branch.
cplx nondim_chi(const LayerParams& layer, const WaveCoordinates& w, double rho);

}  // namespace surfwave
