#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "surfwave/solver.hpp"

namespace surfwave {

namespace {

struct Eval {
  bool ok = false;
  Eigen::Vector2d f;
};

Eval eval_scaled(const MediumConfig& cfg, double k, double om) {
  Eval e;
  if (!(k > 0.0) || !(om > 0.0)) return e;
  try {
    const auto r = residual(cfg, {k, om});
    e.f = {r.re / r.scale, r.im / r.scale};
    e.ok = std::isfinite(e.f[0]) && std::isfinite(e.f[1]);
  } catch (const Error&) {
  }
  return e;
}

// Minimum-norm step with small singular values dropped: when the imaginary
// part is negligibly small (Gamma -> 0) its row carries no information.
Eigen::Vector2d truncated_step(const Eigen::Matrix2d& J, const Eigen::Vector2d& f, double cutoff) {
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Vector2d y = svd.matrixU().transpose() * f;
  for (int i = 0; i < 2; ++i) y[i] = s[i] > cutoff * s[0] && s[i] > 0.0 ? y[i] / s[i] : 0.0;
  return -(svd.matrixV() * y);
}

}  // namespace

LossyCurvePoint solve_lossy_point(const MediumConfig& base, double gamma, double k_seed, double omega_seed,
                                  const NewtonOptions& opts) {
  MediumConfig cfg = base;
  cfg.lorentz.loss_ratio = gamma;
  Eigen::Vector2d x{k_seed, omega_seed};
  Eval cur = eval_scaled(cfg, x[0], x[1]);
  if (!cur.ok) throw NoConvergence("residual undefined at the seed");

  int it = 0;
  bool converged = false;
  for (; it <= opts.max_iter && !converged; ++it) {
    Eigen::Matrix2d J;
    for (int j = 0; j < 2; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      Eigen::Vector2d xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const Eval fp = eval_scaled(cfg, xp[0], xp[1]), fm = eval_scaled(cfg, xm[0], xm[1]);
      if (!fp.ok || !fm.ok) throw NoConvergence("finite-difference stencil hit a pole");
      J.col(j) = (fp.f - fm.f) / (2.0 * h);
    }
    const Eigen::Vector2d dx = truncated_step(J, cur.f, opts.svd_cutoff);
    const double f_inf = cur.f.cwiseAbs().maxCoeff();
    if (f_inf < opts.f_tol && dx.cwiseAbs().maxCoeff() < opts.step_tol) {
      converged = true;
      break;
    }
    if (it == opts.max_iter) break;
    double t = 1.0;
    bool accepted = false;
    for (int b = 0; b <= opts.max_backtracks; ++b, t *= 0.5) {
      const Eigen::Vector2d xn = x + t * dx;
      const Eval fn = eval_scaled(cfg, xn[0], xn[1]);
      if (fn.ok && (fn.f.norm() < cur.f.norm() || fn.f.cwiseAbs().maxCoeff() < opts.f_tol)) {
        x = xn;
        cur = fn;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (f_inf < opts.f_tol) converged = true;
      break;
    }
    if (cur.f.cwiseAbs().maxCoeff() < opts.f_tol && (t * dx).cwiseAbs().maxCoeff() < opts.step_tol) {
      ++it;
      converged = true;
    }
  }
  if (!converged) throw NoConvergence("Newton did not converge within " + std::to_string(opts.max_iter) + " iterations");

  LossyCurvePoint p;
  p.gamma = gamma;
  p.log10_gamma = gamma > 0.0 ? std::log10(gamma) : -std::numeric_limits<double>::infinity();
  p.k_hat = x[0];
  p.omega_hat = x[1];
  p.newton_residual = cur.f.cwiseAbs().maxCoeff();
  p.iterations = it;
  const auto adm = admissibility(cfg, {x[0], x[1]});
  p.admissible = adm.admissible;
  p.multiplier = adm.multiplier;
  if (opts.require_admissible && !p.admissible) {
    std::string why = !adm.decay_lorentz ? "Re alpha_L <= 0" : "|lambda| = " + std::to_string(std::abs(adm.multiplier));
    throw InadmissibleRoot("converged root is not admissible (" + why + ")");
  }
  return p;
}

std::vector<LossyCurvePoint> continue_in_gamma(const MediumConfig& cfg, const GammaRange& range, double k_seed,
                                               double omega_seed, const ContinuationOptions& opts) {
  if (range.n < 1) throw ConfigError("continuation needs n >= 1");
  std::vector<LossyCurvePoint> pts;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    pts.push_back(solve_lossy_point(cfg, std::pow(10.0, range.log10_start), k_seed, omega_seed, opts.newton));
    pts.back().log10_gamma = range.log10_start;
  } catch (const Error& e) {
    throw CurveTerminated({}, nan, std::string("seed failed at range start: ") + e.what());
  }
  if (range.n == 1) return pts;

  const double span = range.log10_end - range.log10_start;
  double cur = range.log10_start;
  for (int i = 1; i < range.n; ++i) {
    const double target = i + 1 == range.n ? range.log10_end : range.log10_start + span * i / (range.n - 1);
    while (cur != target) {
      double delta = target - cur;
      int halvings = 0;
      for (;;) {
        const double t = cur + delta;
        double kp = pts.back().k_hat, op = pts.back().omega_hat;
        if (pts.size() >= 2) {
          const auto& a = pts[pts.size() - 2];
          const auto& b = pts.back();
          const double s = (t - b.log10_gamma) / (b.log10_gamma - a.log10_gamma);
          kp = b.k_hat + s * (b.k_hat - a.k_hat);
          op = b.omega_hat + s * (b.omega_hat - a.omega_hat);
        }
        std::string reason;
        try {
          auto p = solve_lossy_point(cfg, std::pow(10.0, t), kp, op, opts.newton);
          p.log10_gamma = t;
          if (std::abs(p.k_hat - pts.back().k_hat) <= opts.max_jump &&
              std::abs(p.omega_hat - pts.back().omega_hat) <= opts.max_jump) {
            pts.push_back(p);
            cur = t;
            break;
          }
          reason = "jump exceeds max_jump";
        } catch (const Error& e) {
          reason = e.what();
        }
        if (++halvings > opts.max_halvings) {
          const double last = pts.back().log10_gamma;
          throw CurveTerminated(std::move(pts), last,
                                "continuation stalled after log10(Gamma) = " + std::to_string(last) + ": " + reason);
        }
        delta /= 2.0;
      }
    }
  }
  return pts;
}

Revalidation revalidate(const MediumConfig& base, const std::vector<LossyCurvePoint>& points, double tol) {
  Revalidation r;
  for (const auto& p : points) {
    MediumConfig cfg = base;
    cfg.lorentz.loss_ratio = p.gamma;
    ++r.checked;
    try {
      const auto ev = evaluate(cfg, {p.k_hat, p.omega_hat});
      const double worst = std::max(std::abs(ev.residual.re), std::abs(ev.residual.im)) / ev.residual.scale;
      r.worst_residual = std::max(r.worst_residual, worst);
      if (!(worst < tol)) ++r.residual_failures;
      if (!ev.admissibility.admissible) ++r.inadmissible;
    } catch (const Error&) {
      ++r.residual_failures;
    }
  }
  return r;
}

}  // namespace surfwave
