#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "surfwave/parallel.hpp"
#include "surfwave/solver.hpp"

namespace surfwave {

void validate_grid(const ScanGrid& grid) {
  auto check = [](const AxisRange& r, const char* name) {
    if (r.n < 2) throw ConfigError(std::string(name) + " grid needs n >= 2");
    if (!(r.min > 0.0) || !(r.max > r.min) || !std::isfinite(r.max))
      throw ConfigError(std::string(name) + " range must be positive and increasing");
  };
  check(grid.k_hat, "k_hat");
  check(grid.omega_hat, "omega_hat");
}

namespace {

// Real part of the scaled residual; nullopt at poles and resonances.
std::optional<double> real_scaled(const MediumConfig& cfg, double k, double om) {
  try {
    const auto r = residual(cfg, {k, om});
    const double v = r.re / r.scale;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const Error&) {
    return std::nullopt;
  }
}

template <class G>
std::optional<double> bisect(G g, double a, double b, double fa, double tol) {
  for (int it = 0; it < 400 && (b - a) > tol; ++it) {
    const double m = 0.5 * (a + b);
    const auto fm = g(m);
    if (!fm) return std::nullopt;
    if (*fm == 0.0) return m;
    if ((*fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = *fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Sign changes of g over consecutive samples; an undefined sample excludes both
// neighbouring cells.
template <class G>
std::vector<double> line_roots(G g, const std::vector<double>& ts, double tol) {
  std::vector<std::optional<double>> vals(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) vals[i] = g(ts[i]);
  std::vector<double> roots;
  for (size_t i = 0; i < ts.size(); ++i) {
    if (vals[i] && *vals[i] == 0.0) roots.push_back(ts[i]);
    if (i + 1 == ts.size() || !vals[i] || !vals[i + 1]) continue;
    const double fa = *vals[i], fb = *vals[i + 1];
    if (fa == 0.0 || fb == 0.0 || (fa > 0.0) == (fb > 0.0)) continue;
    if (auto r = bisect(g, ts[i], ts[i + 1], fa, tol)) roots.push_back(*r);
  }
  return roots;
}

std::optional<WavePoint> verify(const MediumConfig& cfg, double k, double om, PointOrigin origin, int index,
                                const ScanOptions& opts) {
  try {
    const auto ev = evaluate(cfg, {k, om});
    const double rn = ev.residual.scaled_norm();
    if (!(rn < opts.residual_tol) || !ev.admissibility.admissible) return std::nullopt;
    WavePoint p;
    p.k_hat = k;
    p.omega_hat = om;
    p.gamma = cfg.lorentz.loss_ratio;
    p.residual_norm = rn;
    p.admissibility = ev.admissibility;
    p.origin = origin;
    p.line_index = index;
    return p;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<double> axis_values(const AxisRange& r) {
  std::vector<double> v(r.n);
  for (int i = 0; i < r.n; ++i) v[i] = r.at(i);
  return v;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = i == n ? b : a + (b - a) * i / n;
  return v;
}

}  // namespace

std::vector<WavePoint> column_roots(const MediumConfig& cfg, const ScanGrid& grid, int column,
                                    const ScanOptions& opts) {
  const double om = grid.omega_hat.at(column);
  auto g = [&](double k) { return real_scaled(cfg, k, om); };
  std::vector<WavePoint> out;
  for (double k : line_roots(g, axis_values(grid.k_hat), opts.root_tol))
    if (auto p = verify(cfg, k, om, PointOrigin::Column, column, opts)) out.push_back(*p);
  return out;
}

std::vector<WavePoint> row_roots(const MediumConfig& cfg, const ScanGrid& grid, int row, const ScanOptions& opts) {
  const double k = grid.k_hat.at(row);
  auto g = [&](double om) { return real_scaled(cfg, k, om); };
  std::vector<WavePoint> out;
  for (double om : line_roots(g, axis_values(grid.omega_hat), opts.root_tol))
    if (auto p = verify(cfg, k, om, PointOrigin::Row, row, opts)) out.push_back(*p);
  return out;
}

std::optional<WavePoint> local_root_k(const MediumConfig& cfg, double omega_hat, double k_center, double half_width,
                                      const ScanOptions& opts, int subdivisions) {
  const double lo = std::max(k_center - half_width, 1e-3 * half_width);
  const double hi = k_center + half_width;
  if (!(hi > lo)) return std::nullopt;
  auto g = [&](double k) { return real_scaled(cfg, k, omega_hat); };
  std::optional<WavePoint> best;
  for (double k : line_roots(g, linspace(lo, hi, subdivisions), opts.root_tol)) {
    auto p = verify(cfg, k, omega_hat, PointOrigin::CutOn, -1, opts);
    if (p && (!best || std::abs(k - k_center) < std::abs(best->k_hat - k_center))) best = p;
  }
  return best;
}

std::vector<DispersionBranch> link_points(std::vector<WavePoint> points, const ScanGrid& grid, double gate) {
  const double dk = grid.k_hat.step(), dO = grid.omega_hat.step();
  auto u = [&](const WavePoint& p) { return (p.k_hat - grid.k_hat.min) / dk; };
  auto v = [&](const WavePoint& p) { return (p.omega_hat - grid.omega_hat.min) / dO; };

  // drop duplicates (column and row passes meet at grid intersections)
  {
    std::vector<WavePoint> kept;
    std::map<std::pair<long, long>, std::vector<size_t>> cells;
    for (const auto& p : points) {
      const long cu = static_cast<long>(std::floor(u(p))), cv = static_cast<long>(std::floor(v(p)));
      bool dup = false;
      for (long a = cu - 1; a <= cu + 1 && !dup; ++a)
        for (long b = cv - 1; b <= cv + 1 && !dup; ++b) {
          auto it = cells.find({a, b});
          if (it == cells.end()) continue;
          for (size_t q : it->second)
            if (std::abs(kept[q].k_hat - p.k_hat) < 1e-9 && std::abs(kept[q].omega_hat - p.omega_hat) < 1e-9) dup = true;
        }
      if (dup) continue;
      cells[{cu, cv}].push_back(kept.size());
      kept.push_back(p);
    }
    points = std::move(kept);
  }

  const size_t n = points.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), size_t{0});
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::pair<long, long>, std::vector<size_t>> buckets;
  for (size_t i = 0; i < n; ++i)
    buckets[{static_cast<long>(std::floor(u(points[i]) / gate)), static_cast<long>(std::floor(v(points[i]) / gate))}]
        .push_back(i);
  for (const auto& [cell, members] : buckets) {
    for (long a = cell.first - 1; a <= cell.first + 1; ++a)
      for (long b = cell.second - 1; b <= cell.second + 1; ++b) {
        auto it = buckets.find({a, b});
        if (it == buckets.end()) continue;
        for (size_t i : members)
          for (size_t j : it->second) {
            if (j <= i) continue;
            const double du = u(points[i]) - u(points[j]), dv = v(points[i]) - v(points[j]);
            if (du * du + dv * dv <= gate * gate) parent[find(i)] = find(j);
          }
      }
  }

  std::map<size_t, std::vector<WavePoint>> groups;
  for (size_t i = 0; i < n; ++i) groups[find(i)].push_back(points[i]);
  std::vector<DispersionBranch> out;
  for (auto& [root, pts] : groups) {
    double ulo = 1e300, uhi = -1e300, vlo = 1e300, vhi = -1e300;
    for (const auto& p : pts) {
      ulo = std::min(ulo, u(p)), uhi = std::max(uhi, u(p));
      vlo = std::min(vlo, v(p)), vhi = std::max(vhi, v(p));
    }
    const bool by_omega = (vhi - vlo) >= (uhi - ulo);
    std::sort(pts.begin(), pts.end(), [&](const WavePoint& a, const WavePoint& b) {
      if (by_omega) return a.omega_hat != b.omega_hat ? a.omega_hat < b.omega_hat : a.k_hat < b.k_hat;
      return a.k_hat != b.k_hat ? a.k_hat < b.k_hat : a.omega_hat < b.omega_hat;
    });
    DispersionBranch br;
    br.points = std::move(pts);
    out.push_back(std::move(br));
  }
  auto lowest = [](const DispersionBranch& b) {
    const WavePoint* best = &b.points.front();
    for (const auto& p : b.points)
      if (p.omega_hat < best->omega_hat || (p.omega_hat == best->omega_hat && p.k_hat < best->k_hat)) best = &p;
    return std::pair{best->omega_hat, best->k_hat};
  };
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return lowest(a) < lowest(b); });
  for (size_t i = 0; i < out.size(); ++i) out[i].branch_id = static_cast<int>(i);
  return out;
}

WavePoint refine_cuton(const MediumConfig& cfg, const ScanGrid& grid, const WavePoint& endpoint,
                       const ScanOptions& opts, bool* at_grid_edge) {
  const double dk = grid.k_hat.step(), dO = grid.omega_hat.step();
  const double om_min = grid.omega_hat.min;
  if (at_grid_edge) *at_grid_edge = false;
  WavePoint ok = endpoint;
  if (ok.omega_hat <= om_min + 1e-12) {
    if (at_grid_edge) *at_grid_edge = true;
    return ok;
  }
  double slope = 0.0;  // dk/dOmega along the branch
  double step = dO / 8.0;
  double fail = std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < 100000; ++it) {
    const double om = std::max(ok.omega_hat - step, om_min);
    const double kp = ok.k_hat + slope * (om - ok.omega_hat);
    const double width = std::max(dk, 2.0 * std::abs(kp - ok.k_hat));
    auto r = local_root_k(cfg, om, kp, width, opts);
    if (!r) {
      fail = om;
      break;
    }
    slope = (r->k_hat - ok.k_hat) / (r->omega_hat - ok.omega_hat);
    ok = *r;
    if (om <= om_min) {
      if (at_grid_edge) *at_grid_edge = true;
      ok.origin = PointOrigin::CutOn;
      return ok;
    }
    step = std::min(step * 1.5, dO);
  }
  double lo = fail;
  for (int it = 0; it < 200 && ok.omega_hat - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + ok.omega_hat);
    const double kp = ok.k_hat + slope * (mid - ok.omega_hat);
    const double width = std::max(dk / 4.0, 4.0 * std::abs(kp - ok.k_hat));
    auto r = local_root_k(cfg, mid, kp, width, opts);
    if (r) {
      if (ok.omega_hat - r->omega_hat > 1e-8) slope = (r->k_hat - ok.k_hat) / (r->omega_hat - ok.omega_hat);
      ok = *r;
    } else {
      lo = mid;
    }
  }
  ok.origin = PointOrigin::CutOn;
  return ok;
}

std::vector<DispersionBranch> scan_lossless(const MediumConfig& cfg, const ScanGrid& grid, const ScanOptions& opts) {
  validate_config(cfg);
  validate_grid(grid);
  if (cfg.lorentz.loss_ratio != 0.0) throw ConfigError("scan_lossless requires lorentz.loss_ratio = 0");

  auto cols = parallel_map(grid.omega_hat.n, [&](int j) { return column_roots(cfg, grid, j, opts); }, opts.threads);
  std::vector<WavePoint> pts;
  for (auto& c : cols) pts.insert(pts.end(), c.begin(), c.end());
  if (opts.row_pass) {
    auto rows = parallel_map(grid.k_hat.n, [&](int i) { return row_roots(cfg, grid, i, opts); }, opts.threads);
    for (auto& r : rows) pts.insert(pts.end(), r.begin(), r.end());
  }
  auto branches = link_points(std::move(pts), grid, opts.link_gate);
  if (opts.refine_cuton) {
    auto refined = parallel_map(
        static_cast<int>(branches.size()),
        [&](int b) {
          const auto& br = branches[b];
          const WavePoint* low = &br.points.front();
          for (const auto& p : br.points)
            if (p.omega_hat < low->omega_hat) low = &p;
          bool edge = false;
          WavePoint c = refine_cuton(cfg, grid, *low, opts, &edge);
          return std::pair{c, edge};
        },
        opts.threads);
    for (size_t b = 0; b < branches.size(); ++b) {
      branches[b].cuton = refined[b].first;
      branches[b].cuton_at_grid_edge = refined[b].second;
    }
  }
  return branches;
}

}  // namespace surfwave
