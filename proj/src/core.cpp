#include "surfwave/core.hpp"

#include <algorithm>
#include <cmath>

namespace surfwave {

std::string to_string(Polarization p) { return p == Polarization::TE ? "TE" : "TM"; }

Polarization polarization_from_string(const std::string& s) {
  if (s == "TE") return Polarization::TE;
  if (s == "TM") return Polarization::TM;
  throw ConfigError("polarization must be \"TE\" or \"TM\", got \"" + s + "\"");
}

std::vector<std::string> config_violations(const MediumConfig& cfg) {
  std::vector<std::string> out;
  auto finite = [](double x) { return std::isfinite(x); };
  auto layer = [&](const LayerParams& l, const char* name) {
    if (!finite(l.eps_rel) || !(l.eps_rel > 0.0)) out.push_back(std::string(name) + ".eps_rel must be > 0");
    if (!finite(l.mu_rel) || !(l.mu_rel > 0.0)) out.push_back(std::string(name) + ".mu_rel must be > 0");
  };
  layer(cfg.layer_a, "layer_a");
  layer(cfg.layer_b, "layer_b");
  if (!finite(cfg.fill) || !(cfg.fill > 0.0 && cfg.fill < 1.0)) out.push_back("h must lie in (0, 1)");
  if (!finite(cfg.rho) || !(cfg.rho > 0.0)) out.push_back("rho must be > 0");
  if (!finite(cfg.lorentz.plasma_ratio) || cfg.lorentz.plasma_ratio < 0.0)
    out.push_back("lorentz.plasma_ratio must be >= 0");
  if (!finite(cfg.lorentz.loss_ratio) || cfg.lorentz.loss_ratio < 0.0)
    out.push_back("lorentz.loss_ratio must be >= 0");
  if (!finite(cfg.lorentz.mu_rel)) out.push_back("lorentz.mu_rel must be finite");
  return out;
}

void validate_config(const MediumConfig& cfg) {
  auto v = config_violations(cfg);
  if (v.empty()) return;
  std::string msg = "invalid config:";
  for (const auto& s : v) msg += " " + s + ";";
  throw ConfigError(msg);
}

double ComplexMat2::frobenius() const {
  return std::sqrt(std::norm(m11) + std::norm(m12) + std::norm(m21) + std::norm(m22));
}

ComplexMat2 ComplexMat2::inverse() const {
  const cplx d = det();
  if (d == 0.0) throw Error("singular 2x2 matrix");
  return {m22 / d, -m12 / d, -m21 / d, m11 / d};
}

ComplexMat2 ComplexMat2::operator*(const ComplexMat2& o) const {
  return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
          m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
}

CVec2 ComplexMat2::operator*(const CVec2& v) const {
  return {m11 * v[0] + m12 * v[1], m21 * v[0] + m22 * v[1]};
}

ComplexMat2 ComplexMat2::operator+(const ComplexMat2& o) const {
  return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22};
}

ComplexMat2 ComplexMat2::operator-(const ComplexMat2& o) const {
  return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22};
}

ComplexMat2 ComplexMat2::operator*(cplx s) const { return {m11 * s, m12 * s, m21 * s, m22 * s}; }

double norm(const CVec2& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

namespace {

// Eigenvector for lambda from whichever row of (m - lambda I) carries more information.
CVec2 eigenvector_for(const ComplexMat2& m, cplx lambda) {
  CVec2 a{m.m12, lambda - m.m11};
  CVec2 b{lambda - m.m22, m.m21};
  CVec2 v = norm(a) >= norm(b) ? a : b;
  double n = norm(v);
  if (n == 0.0) throw DegenerateSpectrum("eigenvector undefined");
  v[0] /= n;
  v[1] /= n;
  // phase: largest component real positive
  const cplx big = std::abs(v[0]) >= std::abs(v[1]) ? v[0] : v[1];
  const cplx phase = std::conj(big) / std::abs(big);
  v[0] *= phase;
  v[1] *= phase;
  return v;
}

}  // namespace

EigenDecomposition eigen_decompose(const ComplexMat2& m, double tau) {
  const cplx tr = m.trace();
  const cplx det = m.det();
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  // larger-modulus root first, the other from the product to avoid cancellation
  const cplx p = tr + disc;
  const cplx q = tr - disc;
  cplx big = (std::abs(p) >= std::abs(q) ? p : q) / 2.0;
  cplx small = big != 0.0 ? det / big : cplx(0.0);
  if (std::abs(big - small) <= tau * (std::abs(big) + std::abs(small)))
    throw DegenerateSpectrum("repeated eigenvalue (band edge)");

  std::array<cplx, 2> vals{small, big};
  const double a0 = std::abs(vals[0]), a1 = std::abs(vals[1]);
  const bool tie = std::abs(a0 - a1) <= 1e-12 * std::max(a0, a1);
  if ((tie && std::arg(vals[1]) < std::arg(vals[0])) || (!tie && a1 < a0)) std::swap(vals[0], vals[1]);

  EigenDecomposition out;
  out.values = vals;
  out.vectors = {eigenvector_for(m, vals[0]), eigenvector_for(m, vals[1])};
  return out;
}

cplx principal_sqrt(cplx z) {
  if (z.imag() == 0.0) z = cplx(z.real(), 0.0);
  return std::sqrt(z);
}

cplx nondim_chi(const LayerParams& layer, const WaveCoordinates& w, double rho) {
  if (w.k_hat == 0.0) throw Error("nondim_chi: k_hat must be nonzero");
  const double v = w.phase_velocity(rho);
  return principal_sqrt(cplx(1.0 - v * v * layer.mu_rel * layer.eps_rel, 0.0));
}

}  // namespace surfwave
