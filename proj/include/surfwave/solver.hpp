#pragma once

#include <optional>
#include <vector>

#include "surfwave/core.hpp"
#include "surfwave/dispersion.hpp"

namespace surfwave {

struct AxisRange {
  double min = 0.0;
  double max = 1.0;
  int n = 2;

  double step() const { return (max - min) / (n - 1); }
  double at(int i) const { return i == n - 1 ? max : min + i * step(); }
};

struct ScanGrid {
  AxisRange k_hat;
  AxisRange omega_hat;
};

// Throws ConfigError unless n >= 2 and both ranges are positive and increasing.
void validate_grid(const ScanGrid& grid);

enum class PointOrigin { Column, Row, CutOn };

struct WavePoint {
  double k_hat = 0.0;
  double omega_hat = 0.0;
  double gamma = 0.0;
  double residual_norm = 0.0;  // |R| / scale
  Admissibility admissibility;
  PointOrigin origin = PointOrigin::Column;
  int line_index = -1;  // grid column (Column) or row (Row) the root came from
};

struct DispersionBranch {
  int branch_id = 0;
  std::vector<WavePoint> points;
  std::optional<WavePoint> cuton;  // refined minimal-Omega end
  bool cuton_at_grid_edge = false;
};

struct ScanOptions {
  bool row_pass = true;  // also bisect along fixed-k rows (catches flat branches)
  bool refine_cuton = true;
  unsigned threads = 0;  // 0: hardware concurrency
  double root_tol = 1e-12;
  double residual_tol = 1e-9;
  double link_gate = 2.0;  // in grid steps
};

// Admissible roots along one grid line, bisection-refined, in ascending order.
std::vector<WavePoint> column_roots(const MediumConfig& cfg, const ScanGrid& grid, int column,
                                    const ScanOptions& opts = {});
std::vector<WavePoint> row_roots(const MediumConfig& cfg, const ScanGrid& grid, int row,
                                 const ScanOptions& opts = {});

// Root in k_hat at fixed Omega nearest to k_center within +-half_width.
std::optional<WavePoint> local_root_k(const MediumConfig& cfg, double omega_hat, double k_center,
                                      double half_width, const ScanOptions& opts = {}, int subdivisions = 16);

// Union-find on points within link_gate grid steps; branches sorted by lowest Omega.
std::vector<DispersionBranch> link_points(std::vector<WavePoint> points, const ScanGrid& grid, double gate);

// Marches the branch end down in Omega until the root is lost or turns
// inadmissible, then bisects the transition to 1e-12.
WavePoint refine_cuton(const MediumConfig& cfg, const ScanGrid& grid, const WavePoint& endpoint,
                       const ScanOptions& opts = {}, bool* at_grid_edge = nullptr);

// Requires loss_ratio == 0 (throws ConfigError otherwise).
std::vector<DispersionBranch> scan_lossless(const MediumConfig& cfg, const ScanGrid& grid,
                                            const ScanOptions& opts = {});

// ---- lossy points and continuation in Gamma ----

struct LossyCurvePoint {
  double gamma = 0.0;
  double log10_gamma = 0.0;
  double omega_hat = 0.0;
  double k_hat = 0.0;
  double newton_residual = 0.0;  // max(|Re R|, |Im R|) / scale
  int iterations = 0;
  bool admissible = false;
  cplx multiplier;
};

struct NewtonOptions {
  int max_iter = 50;
  double f_tol = 1e-9;
  double step_tol = 1e-10;
  int max_backtracks = 20;
  double svd_cutoff = 1e-10;  // singular values below cutoff * sigma_max are dropped
  bool require_admissible = true;
};

// Damped Newton on (Re R, Im R)/scale in (k_hat, Omega) at loss ratio gamma.
// Throws NoConvergence or InadmissibleRoot.
LossyCurvePoint solve_lossy_point(const MediumConfig& cfg, double gamma, double k_seed, double omega_seed,
                                  const NewtonOptions& opts = {});

struct GammaRange {
  double log10_start = -15.0;
  double log10_end = 15.0;
  int n = 61;
};

struct ContinuationOptions {
  NewtonOptions newton;
  int max_halvings = 8;
  double max_jump = 0.5;  // largest accepted change of k_hat or Omega per step
};

class CurveTerminated : public Error {
 public:
  CurveTerminated(std::vector<LossyCurvePoint> partial, double last_good_log10_gamma, const std::string& what)
      : Error(what), partial_(std::move(partial)), last_good_(last_good_log10_gamma) {}
  const std::vector<LossyCurvePoint>& partial() const { return partial_; }
  // NaN when the seed itself failed.
  double last_good_log10_gamma() const { return last_good_; }

 private:
  std::vector<LossyCurvePoint> partial_;
  double last_good_;
};

std::vector<LossyCurvePoint> continue_in_gamma(const MediumConfig& cfg, const GammaRange& range, double k_seed,
                                               double omega_seed, const ContinuationOptions& opts = {});

struct Revalidation {
  size_t checked = 0;
  size_t residual_failures = 0;
  size_t inadmissible = 0;
  double worst_residual = 0.0;
  bool ok() const { return residual_failures == 0 && inadmissible == 0; }
};

// Independent re-evaluation of every emitted point.
Revalidation revalidate(const MediumConfig& cfg, const std::vector<LossyCurvePoint>& points, double tol = 1e-9);

}  // namespace surfwave
