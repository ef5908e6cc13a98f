#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "surfwave/cli.hpp"
#include "surfwave/lorentz.hpp"
#include "surfwave/solver.hpp"
#include "surfwave/transfer.hpp"

namespace surfwave {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

CheckResult permittivity_forms(const MediumConfig& cfg) {
  double worst = 0.0;
  for (double om : linspace(0.05, 3.0, 60)) {
    if (cfg.lorentz.loss_ratio == 0.0 && std::abs(om - 1.0) < 1e-6) continue;
    const cplx a = permittivity(cfg.lorentz, om).value, b = permittivity_compact(cfg.lorentz, om);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  return {"permittivity_forms", worst <= 1e-12, "max rel diff " + sci(worst)};
}

CheckResult monodromy_oracle(const MediumConfig& cfg) {
  double worst = 0.0;
  int used = 0;
  for (double k : linspace(0.2, 3.0, 12))
    for (double om : linspace(0.3, 2.9, 12)) {
      try {
        const auto c = monodromy_closed_form(cfg, {k, om});
        const auto p = monodromy_matrix(cfg, {k, om});
        worst = std::max(worst, (c - p).frobenius() / p.frobenius());
        ++used;
      } catch (const ChiZero&) {
      }
    }
  return {"monodromy_closed_vs_product", used > 0 && worst <= 1e-11,
          std::to_string(used) + " points, max rel diff " + sci(worst)};
}

CheckResult unimodularity(const MediumConfig& cfg) {
  double det_err = 0.0, recip_err = 0.0;
  int gaps = 0;
  for (double k : linspace(0.2, 3.0, 12))
    for (double om : linspace(0.3, 2.9, 12)) {
      const WaveCoordinates w{k, om};
      const auto t = monodromy_matrix(cfg, w);
      det_err = std::max(det_err, std::abs(t.det() - 1.0) / std::max(1.0, t.frobenius() * t.frobenius() * 1e-4));
      if (std::abs(t.trace()) < 2.05) continue;
      const auto m = monodromy_product(cfg, w);
      recip_err = std::max(recip_err, std::abs(m.eigenvalues[0] * m.eigenvalues[1] - 1.0));
      ++gaps;
    }
  return {"det_and_reciprocity", det_err <= 1e-12 && recip_err <= 1e-12,
          "|det-1| " + sci(det_err) + ", |l1 l2 - 1| " + sci(recip_err) + " over " + std::to_string(gaps) +
              " gap points"};
}

std::vector<WavePoint> quick_roots(const MediumConfig& cfg, unsigned threads) {
  ScanOptions o;
  o.threads = threads;
  o.refine_cuton = false;
  std::vector<WavePoint> pts;
  for (const auto& b : scan_lossless(cfg, {{0.05, 3.0, 60}, {0.3, 3.0, 60}}, o))
    pts.insert(pts.end(), b.points.begin(), b.points.end());
  return pts;
}

CheckResult scan_roots(const MediumConfig& cfg, std::vector<WavePoint>& roots) {
  if (cfg.lorentz.loss_ratio != 0.0) return {"scan_determinism_and_roots", true, "n/a (lossy config)"};
  roots = quick_roots(cfg, 1);
  const auto again = quick_roots(cfg, 4);
  bool same = roots.size() == again.size();
  for (size_t i = 0; same && i < roots.size(); ++i)
    same = roots[i].k_hat == again[i].k_hat && roots[i].omega_hat == again[i].omega_hat;
  size_t bad = 0;
  for (const auto& p : roots) {
    const auto ev = evaluate(cfg, {p.k_hat, p.omega_hat});
    if (!(ev.residual.scaled_norm() < 1e-9) || !ev.admissibility.admissible) ++bad;
  }
  return {"scan_determinism_and_roots", same && bad == 0,
          std::to_string(roots.size()) + " roots, " + (same ? "thread-independent" : "THREAD-DEPENDENT") + ", " +
              std::to_string(bad) + " failing re-evaluation"};
}

// At a root the boundary vector (-i zeta, 1) must be the decaying eigenvector.
CheckResult eigenvector_at_roots(const MediumConfig& cfg, const std::vector<WavePoint>& roots) {
  if (roots.empty()) return {"boundary_vector_is_eigenvector", true, "n/a (no roots)"};
  double worst = 0.0;
  const size_t stride = std::max<size_t>(1, roots.size() / 10);
  for (size_t i = 0; i < roots.size(); i += stride) {
    const WaveCoordinates w{roots[i].k_hat, roots[i].omega_hat};
    const auto in = residual_inputs(cfg, w);
    const cplx zeta = in.chi_l / in.f_l;
    const auto m = monodromy_product(cfg, w);
    const CVec2 u{-kI * zeta, 1.0};
    const CVec2 tu{m.matrix.m11 * u[0] + m.matrix.m12 * u[1], m.matrix.m21 * u[0] + m.matrix.m22 * u[1]};
    // parallel test: |u x Tu| / (|u| |Tu|)
    const double cross = std::abs(u[0] * tu[1] - u[1] * tu[0]) / (norm(u) * norm(tu));
    worst = std::max(worst, cross);
  }
  return {"boundary_vector_is_eigenvector", worst < 1e-8, "max sin(angle) " + sci(worst)};
}

CheckResult profile_continuity(const MediumConfig& cfg, const std::vector<WavePoint>& roots) {
  if (roots.empty()) return {"profile_interface_continuity", true, "n/a (no roots)"};
  const auto& r = roots[roots.size() / 2];
  const WaveCoordinates w{r.k_hat, r.omega_hat};
  const auto lo = lorentz_profile(cfg, w, 2.0, 21);
  const auto up = stratified_profile(cfg, w, 2, 11);
  const auto& a = lo.samples.back();
  const auto& b = up.samples.front();
  const double jump = std::max(std::abs(a.e1 - b.e1), std::abs(a.h2 - b.h2)) / std::max(std::abs(a.e1), std::abs(a.h2));
  return {"profile_interface_continuity", jump < 1e-9,
          "jump " + sci(jump) + " at k_hat=" + sci(r.k_hat) + " omega_hat=" + sci(r.omega_hat)};
}

CheckResult homogeneous_limit(const MediumConfig& cfg) {
  MediumConfig h = cfg;
  h.layer_b = h.layer_a;
  double worst = 0.0;
  int used = 0;
  for (double om : linspace(0.3, 3.0, 200)) {
    try {
      const cplx v2 = homogeneous_dispersion(h, om);
      if (std::abs(v2.imag()) > 1e-12 * std::abs(v2) || !(v2.real() > 0.0)) continue;
      const double k = om * h.rho / std::sqrt(v2.real());
      const auto ev = evaluate(h, {k, om});
      if (!ev.admissibility.admissible) continue;
      worst = std::max(worst, ev.residual.scaled_norm());
      ++used;
    } catch (const Error&) {
    }
  }
  if (used == 0) return {"homogeneous_closed_form", true, "n/a (no admissible closed-form points)"};
  return {"homogeneous_closed_form", worst < 1e-9,
          std::to_string(used) + " points, max scaled residual " + sci(worst)};
}

// Relative impedance error against the small parameter; expected log-log slope 1.
CheckResult classical_slope(const MediumConfig& cfg) {
  LorentzParams lp;
  lp.plasma_ratio = 100.0;
  lp.mu_rel = cfg.lorentz.mu_rel > 0.0 ? cfg.lorentz.mu_rel : 1.0;
  const double om = 0.5;
  std::vector<double> xs, ys;
  for (double lk : linspace(-3.0, -1.5, 7)) {
    const auto c = classical_limit_error(lp, {std::pow(10.0, lk) * cfg.rho, om}, cfg.rho);
    xs.push_back(std::log10(c.small_parameter));
    ys.push_back(std::log10(c.relative_error));
  }
  const double n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {"classical_impedance_slope", std::abs(slope - 1.0) <= 0.1, "slope " + sci(slope)};
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

bool ValidationReport::all_pass() const {
  if (!config_violations.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ValidationReport run_validation(const MediumConfig& cfg, const std::vector<std::string>& violations) {
  ValidationReport r;
  r.config_violations = violations;
  r.checks.push_back({"config_valid", violations.empty(),
                      violations.empty() ? "ok" : std::to_string(violations.size()) + " violation(s)"});
  if (!violations.empty()) return r;
  std::vector<WavePoint> roots;
  r.checks.push_back(guarded("permittivity_forms", [&] { return permittivity_forms(cfg); }));
  r.checks.push_back(guarded("monodromy_closed_vs_product", [&] { return monodromy_oracle(cfg); }));
  r.checks.push_back(guarded("det_and_reciprocity", [&] { return unimodularity(cfg); }));
  r.checks.push_back(guarded("scan_determinism_and_roots", [&] { return scan_roots(cfg, roots); }));
  r.checks.push_back(guarded("boundary_vector_is_eigenvector", [&] { return eigenvector_at_roots(cfg, roots); }));
  r.checks.push_back(guarded("profile_interface_continuity", [&] { return profile_continuity(cfg, roots); }));
  r.checks.push_back(guarded("homogeneous_closed_form", [&] { return homogeneous_limit(cfg); }));
  r.checks.push_back(guarded("classical_impedance_slope", [&] { return classical_slope(cfg); }));
  return r;
}

void write_validation_table(std::ostream& os, const ValidationReport& r) {
  size_t width = 5;
  for (const auto& c : r.checks) width = std::max(width, c.name.size());
  for (const auto& v : r.config_violations) os << "config violation: " << v << "\n";
  for (const auto& c : r.checks) {
    os << (c.passed ? "PASS  " : "FAIL  ") << c.name << std::string(width - c.name.size() + 2, ' ') << c.detail
       << "\n";
  }
}

std::string validation_json(const ValidationReport& r) {
  nlohmann::json j;
  j["all_pass"] = r.all_pass();
  j["config_violations"] = r.config_violations;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return j.dump();
}

}  // namespace surfwave
