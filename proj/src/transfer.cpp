#include "surfwave/transfer.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "surfwave/lorentz.hpp"
#include "detail/hyper.hpp"

namespace surfwave {

namespace {

using detail::hyper;
using detail::Hyper;

double chi_squared(const LayerParams& layer, const WaveCoordinates& w, double rho) {
  const double v = w.phase_velocity(rho);
  return 1.0 - v * v * layer.mu_rel * layer.eps_rel;
}

}  // namespace

double layer_factor(const LayerParams& layer, Polarization pol) {
  return pol == Polarization::TE ? layer.eps_rel : -layer.mu_rel;
}

ComplexMat2 LayerPropagator::unscaled() const { return log_scale == 0.0 ? matrix : matrix * std::exp(log_scale); }

ComplexMat2 layer_generator(const LayerParams& layer, const WaveCoordinates& w, double rho, Polarization pol) {
  const double f = layer_factor(layer, pol);
  const double c2 = chi_squared(layer, w, rho);
  return {0.0, -kI * w.k_hat * c2 / f, kI * w.k_hat * f, 0.0};
}

LayerPropagator layer_propagator(const LayerParams& layer, const WaveCoordinates& w, double rho,
                                 double thickness_hat, Polarization pol) {
  if (thickness_hat < 0.0) throw Error("layer_propagator: negative thickness");
  const double f = layer_factor(layer, pol);
  const double c2 = chi_squared(layer, w, rho);
  const cplx chi = principal_sqrt(cplx(c2, 0.0));
  const double kt = w.k_hat * thickness_hat;
  const Hyper hy = hyper(chi * kt);
  LayerPropagator out;
  out.chi = chi;
  out.thickness_hat = thickness_hat;
  out.log_scale = hy.scale;
  // entries depend on chi^2 only; sinh(z)/z carries the removable singularity
  out.matrix = {hy.c, -kI * (c2 * kt / f) * hy.sc, kI * (f * kt) * hy.sc, hy.c};
  return out;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Gap: return "gap";
    case Regime::Band: return "band";
    default: return "degenerate";
  }
}

Regime classify_trace(cplx trace, double tau) {
  const double a = std::abs(trace);
  if (std::abs(trace.imag()) <= 1e-12 * std::max(1.0, a)) {
    const double t = std::abs(trace.real());
    if (t > 2.0 + tau) return Regime::Gap;
    if (t < 2.0 - tau) return Regime::Band;
    return Regime::Degenerate;
  }
  // complex trace: roots of l^2 - tr l + 1 never sit on the unit circle together
  const cplx disc = std::sqrt(trace * trace - 4.0);
  const cplx p = (trace + disc) / 2.0, q = (trace - disc) / 2.0;
  const double big = std::max(std::abs(p), std::abs(q));
  if (big > 1.0 + tau) return Regime::Gap;
  return Regime::Degenerate;
}

namespace {

struct ScaledMatrix {
  ComplexMat2 m;
  double log_scale;
};

ScaledMatrix period_matrix(const MediumConfig& cfg, const WaveCoordinates& w) {
  const auto a = layer_propagator(cfg.layer_a, w, cfg.rho, cfg.fill, cfg.polarization);
  const auto b = layer_propagator(cfg.layer_b, w, cfg.rho, 1.0 - cfg.fill, cfg.polarization);
  return {b.matrix * a.matrix, a.log_scale + b.log_scale};
}

}  // namespace

ComplexMat2 monodromy_matrix(const MediumConfig& cfg, const WaveCoordinates& w) {
  const auto s = period_matrix(cfg, w);
  return s.log_scale == 0.0 ? s.m : s.m * std::exp(s.log_scale);
}

Monodromy monodromy_product(const MediumConfig& cfg, const WaveCoordinates& w) {
  const auto s = period_matrix(cfg, w);
  Monodromy out;
  out.matrix = s.m;
  out.log_scale = s.log_scale;
  const auto eig = eigen_decompose(s.m);
  out.eigenvectors = eig.vectors;
  if (s.log_scale == 0.0) {
    out.eigenvalues = eig.values;
    out.regime = classify_trace(s.m.trace());
  } else {
    // normalized matrix is nearly rank one; recover the pair from det = 1
    const cplx big = eig.values[1] * std::exp(s.log_scale);
    out.eigenvalues = {1.0 / big, big};
    out.regime = Regime::Gap;
  }
  return out;
}

ComplexMat2 monodromy_closed_form(const MediumConfig& cfg, const WaveCoordinates& w) {
  const cplx xa = nondim_chi(cfg.layer_a, w, cfg.rho);
  const cplx xb = nondim_chi(cfg.layer_b, w, cfg.rho);
  if (std::abs(xa) < kPoleTol) throw ChiZero("chi_A vanishes");
  if (std::abs(xb) < kPoleTol) throw ChiZero("chi_B vanishes");
  const double ea = layer_factor(cfg.layer_a, cfg.polarization);
  const double eb = layer_factor(cfg.layer_b, cfg.polarization);
  const double h = cfg.fill;
  const cplx SA = std::sinh(xa * w.k_hat * h), CA = std::cosh(xa * w.k_hat * h);
  const cplx SB = std::sinh(xb * w.k_hat * (1.0 - h)), CB = std::cosh(xb * w.k_hat * (1.0 - h));
  ComplexMat2 t;
  t.m11 = CB * CA + (xb * ea / (xa * eb)) * SB * SA;
  t.m12 = -kI * (xa / ea * CB * SA + xb / eb * SB * CA);
  t.m21 = kI * (eb / xb * SB * CA + ea / xa * CB * SA);
  t.m22 = CB * CA + (xa * eb / (xb * ea)) * SB * SA;
  return t;
}

ComplexMat2 fundamental_matrix(const MediumConfig& cfg, const WaveCoordinates& w, double x) {
  if (x < 0.0) throw Error("fundamental_matrix: x must be >= 0");
  const auto pa = layer_propagator(cfg.layer_a, w, cfg.rho, cfg.fill, cfg.polarization).unscaled();
  const auto pb = layer_propagator(cfg.layer_b, w, cfg.rho, 1.0 - cfg.fill, cfg.polarization).unscaled();
  const double periods = std::floor(x);
  double r = x - periods;
  ComplexMat2 phi = ComplexMat2::identity();
  for (long p = 0; p < static_cast<long>(periods); ++p) phi = pb * (pa * phi);
  if (r <= cfg.fill) return layer_propagator(cfg.layer_a, w, cfg.rho, r, cfg.polarization).unscaled() * phi;
  phi = pa * phi;
  return layer_propagator(cfg.layer_b, w, cfg.rho, r - cfg.fill, cfg.polarization).unscaled() * phi;
}

namespace {

ComplexMat2 diag_exp(const std::array<cplx, 2>& ex, double x) {
  return {std::exp(x * ex[0]), 0.0, 0.0, std::exp(x * ex[1])};
}

}  // namespace

FloquetFactorization floquet_factorize(const MediumConfig& cfg, const WaveCoordinates& w,
                                       std::span<const double> x_grid) {
  FloquetFactorization f;
  f.monodromy = monodromy_product(cfg, w);
  if (f.monodromy.log_scale != 0.0) throw Error("floquet_factorize: monodromy outside double range");
  f.exponents = {std::log(f.monodromy.eigenvalues[0]), std::log(f.monodromy.eigenvalues[1])};
  const ComplexMat2 T = f.monodromy.eigenvector_matrix();
  f.samples.reserve(x_grid.size());
  for (double x : x_grid) f.samples.push_back({x, fundamental_matrix(cfg, w, x) * T * diag_exp(f.exponents, -x)});
  return f;
}

ComplexMat2 floquet_periodic_factor(const MediumConfig& cfg, const WaveCoordinates& w,
                                    const FloquetFactorization& f, double r) {
  return fundamental_matrix(cfg, w, r) * f.monodromy.eigenvector_matrix() * diag_exp(f.exponents, -r);
}

ComplexMat2 floquet_reconstruct(const MediumConfig& cfg, const WaveCoordinates& w,
                                const FloquetFactorization& f, double x) {
  const double r = x - std::floor(x);
  const ComplexMat2 T = f.monodromy.eigenvector_matrix();
  return floquet_periodic_factor(cfg, w, f, r) * diag_exp(f.exponents, x) * T.inverse();
}

FieldProfile stratified_profile(const MediumConfig& cfg, const WaveCoordinates& w, int n_periods,
                                int samples_per_layer) {
  if (n_periods < 1 || samples_per_layer < 2) throw Error("stratified_profile: need n_periods >= 1, samples >= 2");
  Monodromy mono;
  try {
    mono = monodromy_product(cfg, w);
  } catch (const DegenerateSpectrum&) {
    throw NotDecaying(NotDecaying::Side::Stratified, "stratified side at a band edge: no decaying Floquet mode");
  }
  if (mono.regime != Regime::Gap)
    throw NotDecaying(NotDecaying::Side::Stratified,
                      std::string("stratified side in ") + to_string(mono.regime) + " regime: |lambda| = 1");
  CVec2 u0 = mono.eigenvectors[0];
  if (std::abs(u0[1]) < 1e-300) throw Error("stratified_profile: decaying mode has H2(0) = 0");
  const cplx n0 = u0[1];
  u0 = {u0[0] / n0, 1.0};
  const cplx lam = mono.eigenvalues[0];
  const double h = cfg.fill;
  const auto pa = layer_propagator(cfg.layer_a, w, cfg.rho, h, cfg.polarization).unscaled();

  FieldProfile out;
  out.wave = w;
  out.polarization = cfg.polarization;
  out.samples.reserve(static_cast<size_t>(n_periods) * 2 * samples_per_layer + 1);
  cplx lp = 1.0;
  const double den = samples_per_layer - 1;
  for (int p = 0; p < n_periods; ++p) {
    const CVec2 up{lp * u0[0], lp * u0[1]};
    for (int j = 0; j < samples_per_layer; ++j) {
      const double s = h * j / den;
      const CVec2 u = layer_propagator(cfg.layer_a, w, cfg.rho, s, cfg.polarization).unscaled() * up;
      out.samples.push_back({p + s, u[0], u[1]});
    }
    const CVec2 ua = pa * up;
    for (int j = 0; j < samples_per_layer; ++j) {
      const double s = (1.0 - h) * j / den;
      const CVec2 u = layer_propagator(cfg.layer_b, w, cfg.rho, s, cfg.polarization).unscaled() * ua;
      out.samples.push_back({p + h + s, u[0], u[1]});
    }
    lp *= lam;
  }
  out.samples.push_back({static_cast<double>(n_periods), lp * u0[0], lp * u0[1]});
  return out;
}

FieldProfile lorentz_profile(const MediumConfig& cfg, const WaveCoordinates& w, double depth, int samples) {
  if (samples < 2 || !(depth > 0.0)) throw Error("lorentz_profile: need depth > 0 and samples >= 2");
  const cplx eps = permittivity(cfg.lorentz, w.omega_hat).value;
  const cplx alpha = alpha_l_from(eps, cfg.lorentz.mu_rel, w, cfg.rho);
  if (!(alpha.real() > 0.0))
    throw NotDecaying(NotDecaying::Side::Lorentz, "Lorentz side not decaying: Re alpha_L <= 0");
  const cplx fl = lorentz_factor(cfg.lorentz, eps, cfg.polarization);
  if (std::abs(fl) < kPoleTol) throw PoleEncountered(cfg.polarization == Polarization::TE ? "eps_L" : "mu_L");
  const cplx zeta = alpha / w.k_hat / fl;
  const cplx e0 = -kI * zeta;

  FieldProfile out;
  out.wave = w;
  out.polarization = cfg.polarization;
  out.samples.reserve(samples);
  for (int j = 0; j < samples; ++j) {
    const double x = j + 1 == samples ? 0.0 : -depth + depth * j / (samples - 1);
    const cplx g = std::exp(alpha * x);
    out.samples.push_back({x, g * e0, g});
  }
  return out;
}

FieldProfile two_sided_profile(const MediumConfig& cfg, const WaveCoordinates& w, int n_periods,
                               int samples_per_layer, double depth, int lorentz_samples) {
  FieldProfile lower = lorentz_profile(cfg, w, depth, lorentz_samples);
  FieldProfile upper = stratified_profile(cfg, w, n_periods, samples_per_layer);
  lower.samples.insert(lower.samples.end(), upper.samples.begin(), upper.samples.end());
  return lower;
}

void write_profile_csv(std::ostream& os, const FieldProfile& p) {
  os << "x3_over_d,Re_E1,Im_E1,Re_H2,Im_H2\n";
  char buf[160];
  for (const auto& s : p.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.x, s.e1.real(), s.e1.imag(), s.h2.real(),
                  s.h2.imag());
    os << buf;
  }
}

}  // namespace surfwave
