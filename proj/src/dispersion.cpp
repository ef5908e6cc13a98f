#include "surfwave/dispersion.hpp"

#include <algorithm>
#include <cmath>

#include "detail/hyper.hpp"
#include "surfwave/lorentz.hpp"
#include "surfwave/transfer.hpp"

namespace surfwave {

namespace {

struct Blocks {
  cplx ca, sa, cb, sb;  // cosh and sinh(z)/z * k t, common factor exp(-log_scale) removed
  double log_scale;
  cplx zeta;
};

Blocks blocks(const ResidualInputs& in) {
  if (std::abs(in.chi_l) < kPoleTol) throw PoleEncountered("chi_L");
  if (std::abs(in.f_l) < kPoleTol) throw PoleEncountered(in.polarization == Polarization::TE ? "eps_L" : "mu_L");
  const double ta = in.k_hat * in.fill, tb = in.k_hat * (1.0 - in.fill);
  const auto ha = detail::hyper(in.chi_a * ta);
  const auto hb = detail::hyper(in.chi_b * tb);
  return {ha.c, ha.sc * ta, hb.c, hb.sc * tb, ha.scale + hb.scale, in.chi_l / in.f_l};
}

}  // namespace

ResidualInputs residual_inputs(const MediumConfig& cfg, const WaveCoordinates& w) {
  const cplx eps = permittivity(cfg.lorentz, w.omega_hat).value;
  ResidualInputs in;
  in.chi_a = nondim_chi(cfg.layer_a, w, cfg.rho);
  in.chi_b = nondim_chi(cfg.layer_b, w, cfg.rho);
  in.chi_l = alpha_l_from(eps, cfg.lorentz.mu_rel, w, cfg.rho) / w.k_hat;
  in.f_a = layer_factor(cfg.layer_a, cfg.polarization);
  in.f_b = layer_factor(cfg.layer_b, cfg.polarization);
  in.f_l = lorentz_factor(cfg.lorentz, eps, cfg.polarization);
  in.k_hat = w.k_hat;
  in.fill = cfg.fill;
  in.polarization = cfg.polarization;
  return in;
}

ResidualValue residual_from(const ResidualInputs& in) {
  const Blocks b = blocks(in);
  const cplx xa2 = in.chi_a * in.chi_a, xb2 = in.chi_b * in.chi_b;
  const cplx ss = b.sa * b.sb;
  const cplx terms[6] = {
      (in.f_b / in.f_a) * xa2 * ss,
      -(in.f_a / in.f_b) * xb2 * ss,
      b.zeta * in.f_a * b.sa * b.cb,
      -xa2 * b.sa * b.cb / (in.f_a * b.zeta),
      b.zeta * in.f_b * b.sb * b.ca,
      -xb2 * b.sb * b.ca / (in.f_b * b.zeta),
  };
  ResidualValue out;
  out.value = 0.0;
  double scale = 0.0;
  for (const cplx& t : terms) {
    out.value += t;
    scale = std::max(scale, std::abs(t));
  }
  out.scale = scale > 0.0 ? scale : 1.0;
  out.re = out.value.real();
  out.im = out.value.imag();
  out.log_scale = b.log_scale;
  out.chi_a = in.chi_a;
  out.chi_b = in.chi_b;
  out.chi_l = in.chi_l;
  return out;
}

ResidualValue residual(const MediumConfig& cfg, const WaveCoordinates& w) {
  return residual_from(residual_inputs(cfg, w));
}

Admissibility admissibility_from(const ResidualInputs& in) {
  const Blocks b = blocks(in);
  const cplx xa2 = in.chi_a * in.chi_a, xb2 = in.chi_b * in.chi_b;
  const cplx ss = b.sa * b.sb;
  const cplx t0 = b.cb * b.ca;
  const cplx t1 = (in.f_b / in.f_a) * xa2 * ss;
  const cplx t2 = (in.f_b * b.sb * b.ca + in.f_a * b.sa * b.cb) * b.zeta;
  const cplx lam_hat = t0 + t1 + t2;
  const cplx tr_hat = 2.0 * t0 + ((in.f_a / in.f_b) * xb2 + (in.f_b / in.f_a) * xa2) * ss;
  const double magnitude = std::max({std::abs(t0), std::abs(t1), std::abs(t2)});

  Admissibility out;
  const bool cancelled = std::abs(lam_hat) < 1e-6 * magnitude;
  if (b.log_scale == 0.0) {
    out.trace = tr_hat;
    out.multiplier = lam_hat;
    if (cancelled) {
      // decaying eigenvalue: take it as the reciprocal of the growing one
      const cplx disc = std::sqrt(tr_hat * tr_hat - 4.0);
      const cplx p = tr_hat + disc, q = tr_hat - disc;
      const cplx big = (std::abs(p) >= std::abs(q) ? p : q) / 2.0;
      out.multiplier = 1.0 / big;
    }
  } else {
    out.trace = tr_hat * std::exp(b.log_scale);
    out.multiplier = cancelled ? std::exp(-b.log_scale) / tr_hat : lam_hat * std::exp(b.log_scale);
  }
  out.decay_lorentz = (in.chi_l * in.k_hat).real() > 0.0;
  const Regime regime = b.log_scale > 0.0 ? Regime::Gap : classify_trace(out.trace);
  out.decay_stratified = regime == Regime::Gap && std::abs(out.multiplier) < 1.0;
  out.admissible = out.decay_lorentz && out.decay_stratified;
  return out;
}

Admissibility admissibility(const MediumConfig& cfg, const WaveCoordinates& w) {
  return admissibility_from(residual_inputs(cfg, w));
}

Evaluation evaluate(const MediumConfig& cfg, const WaveCoordinates& w) {
  const auto in = residual_inputs(cfg, w);
  return {residual_from(in), admissibility_from(in)};
}

cplx homogeneous_velocity_sq(const LayerParams& a, cplx eps_l, double mu_l, Polarization pol) {
  const double fa = pol == Polarization::TE ? a.eps_rel : -a.mu_rel;
  const cplx fl = pol == Polarization::TE ? eps_l : cplx(-mu_l);
  const cplx num = fl * fl - fa * fa;
  const cplx den = fl * fl * a.mu_rel * a.eps_rel - fa * fa * mu_l * eps_l;
  const double size = std::max(std::abs(fl * fl * a.mu_rel * a.eps_rel), std::abs(fa * fa * mu_l * eps_l));
  if (std::abs(den) <= 1e-14 * std::max(size, 1e-300)) throw DegenerateDenominator("homogeneous relation denominator vanishes");
  return num / den;
}

cplx homogeneous_dispersion(const MediumConfig& cfg, double omega_hat) {
  if (cfg.layer_a.eps_rel != cfg.layer_b.eps_rel || cfg.layer_a.mu_rel != cfg.layer_b.mu_rel)
    throw Error("homogeneous_dispersion: layers differ");
  const cplx eps = permittivity(cfg.lorentz, omega_hat).value;
  return homogeneous_velocity_sq(cfg.layer_a, eps, cfg.lorentz.mu_rel, cfg.polarization);
}

cplx babich_limit(const LayerParams& a, cplx eps_l, double mu_l) {
  return 1.0 / principal_sqrt(a.eps_rel * a.mu_rel * (1.0 - mu_l * a.eps_rel / (eps_l * a.mu_rel)));
}

cplx babich_limit(const MediumConfig& cfg, double omega_hat) {
  return babich_limit(cfg.layer_a, permittivity(cfg.lorentz, omega_hat).value, cfg.lorentz.mu_rel);
}

}  // namespace surfwave
