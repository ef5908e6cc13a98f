#include "surfwave/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "surfwave/config_io.hpp"
#include "surfwave/lorentz.hpp"
#include "surfwave/solver.hpp"
#include "surfwave/transfer.hpp"

namespace surfwave {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Globals {
  std::string config_path;
  std::string out_path;
  std::vector<std::string> sets;
  bool no_timestamp = false;
};

struct Loaded {
  MediumConfig cfg;
  std::string json;  // after overrides
  std::vector<std::pair<std::string, std::string>> overrides;
};

Loaded load(const Globals& g, bool check) {
  Loaded l;
  const std::string base = g.config_path.empty() ? config_to_json(MediumConfig{}) : read_text_file(g.config_path);
  for (const auto& s : g.sets) l.overrides.push_back(parse_override(s));
  l.json = apply_overrides(base, l.overrides);
  l.cfg = config_from_json(l.json, check);
  return l;
}

std::string timestamp_utc() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Manifest {
 public:
  Manifest(const Globals& g, std::string command_line) : g_(g), command_(std::move(command_line)) {}

  void write(std::ostream& os, const Loaded& l, const std::vector<std::string>& outputs) const {
    os << "# tool: " << kToolVersion << "\n";
    os << "# command: " << command_ << "\n";
    os << "# config: " << (g_.config_path.empty() ? "(defaults)" : g_.config_path) << "\n";
    os << "# overrides:";
    for (const auto& [k, v] : l.overrides) os << " " << k << "=" << v;
    os << "\n# outputs:";
    for (const auto& o : outputs) os << " " << o;
    os << "\n";
    if (!g_.no_timestamp) os << "# timestamp: " << timestamp_utc() << "\n";
    os << "# resolved_config: " << config_to_json(l.cfg, -1) << "\n";
  }

 private:
  const Globals& g_;
  std::string command_;
};

// Writes to --out when given, otherwise to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty()) {
      os_ = &fallback;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file: " + path);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }
  std::string name() const { return path_.empty() ? "stdout" : path_; }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

std::string suffixed(const std::string& path, const std::string& tag) {
  if (path.empty()) return path;
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "_" + tag;
  return path.substr(0, dot) + "_" + tag + path.substr(dot);
}

std::string joined(int argc, const char* const* argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

// ---- subcommands ----

struct PermittivityArgs {
  double omega_min = 0.01, omega_max = 3.0;
  int n = 300;
};

int cmd_permittivity(const Globals& g, const Manifest& m, const PermittivityArgs& a, std::ostream& out) {
  const Loaded l = load(g, true);
  if (a.n < 1 || !(a.omega_max >= a.omega_min)) throw ConfigError("permittivity: need n >= 1 and omega-max >= omega-min");
  std::vector<std::string> notes;
  std::ostringstream rows;
  for (int i = 0; i < a.n; ++i) {
    const double om = a.n == 1 ? a.omega_min
                      : i == a.n - 1 ? a.omega_max
                                     : a.omega_min + i * (a.omega_max - a.omega_min) / (a.n - 1);
    try {
      const auto p = permittivity(l.cfg.lorentz, om);
      rows << num(om) << "," << num(p.value.real()) << "," << num(p.value.imag()) << "\n";
    } catch (const ResonancePole&) {
      notes.push_back("skipped omega_hat=" + num(om) + " (lossless resonance pole)");
    }
  }
  Sink sink(g.out_path, out);
  auto& os = sink.stream();
  m.write(os, l, {sink.name()});
  for (const auto& n : notes) os << "# " << n << "\n";
  os << "omega_hat,re_eps,im_eps\n" << rows.str();
  return kExitOk;
}

struct ScanArgs {
  double k_min = 0.01, k_max = 3.0, omega_min = 0.5, omega_max = 3.0;
  int k_n = 200, omega_n = 200;
  std::string polarization;  // empty: from config
  bool no_row_pass = false;
  bool no_refine = false;
  unsigned threads = 0;
};

void write_branches(std::ostream& os, const std::vector<DispersionBranch>& branches) {
  for (const auto& b : branches) {
    if (b.cuton)
      os << "# cuton branch_id=" << b.branch_id << " k_hat=" << num(b.cuton->k_hat)
         << " omega_hat=" << num(b.cuton->omega_hat) << " at_grid_edge=" << (b.cuton_at_grid_edge ? 1 : 0) << "\n";
  }
  os << "branch_id,k_hat,omega_hat\n";
  for (const auto& b : branches) {
    if (b.cuton) os << b.branch_id << "," << num(b.cuton->k_hat) << "," << num(b.cuton->omega_hat) << "\n";
    for (const auto& p : b.points) os << b.branch_id << "," << num(p.k_hat) << "," << num(p.omega_hat) << "\n";
  }
}

int cmd_scan(const Globals& g, const Manifest& m, const ScanArgs& a, std::ostream& out, std::ostream& err) {
  const Loaded l = load(g, true);
  if (l.cfg.lorentz.loss_ratio != 0.0) {
    err << "scan: requires a lossless config (lorentz.loss_ratio = 0); use `trace` for Gamma > 0\n";
    return kExitMode;
  }
  ScanGrid grid{{a.k_min, a.k_max, a.k_n}, {a.omega_min, a.omega_max, a.omega_n}};
  validate_grid(grid);
  ScanOptions opts;
  opts.row_pass = !a.no_row_pass;
  opts.refine_cuton = !a.no_refine;
  opts.threads = a.threads;

  std::vector<Polarization> pols;
  if (a.polarization.empty()) {
    pols.push_back(l.cfg.polarization);
  } else if (a.polarization == "both") {
    pols = {Polarization::TE, Polarization::TM};
  } else {
    pols.push_back(polarization_from_string(a.polarization));
  }
  const bool split = pols.size() > 1;
  for (Polarization pol : pols) {
    Loaded lp = l;
    lp.cfg.polarization = pol;
    const auto branches = scan_lossless(lp.cfg, grid, opts);
    Sink sink(split ? suffixed(g.out_path, to_string(pol)) : g.out_path, out);
    auto& os = sink.stream();
    m.write(os, lp, {sink.name()});
    os << "# grid: k_hat=[" << num(a.k_min) << "," << num(a.k_max) << "]x" << a.k_n << " omega_hat=["
       << num(a.omega_min) << "," << num(a.omega_max) << "]x" << a.omega_n << "\n";
    os << "# polarization: " << to_string(pol) << "\n";
    write_branches(os, branches);
  }
  return kExitOk;
}

struct TraceArgs {
  double lg_min = -15.0, lg_max = 15.0;
  int n = 61;
  double k_seed = 0.0, omega_seed = 0.0;
  bool allow_inadmissible = false;
  double max_jump = 0.5;
};

int cmd_trace(const Globals& g, const Manifest& m, const TraceArgs& a, std::ostream& out, std::ostream& err) {
  const Loaded l = load(g, true);
  ContinuationOptions opts;
  opts.newton.require_admissible = !a.allow_inadmissible;
  opts.max_jump = a.max_jump;
  const GammaRange range{a.lg_min, a.lg_max, a.n};

  std::vector<LossyCurvePoint> pts;
  std::optional<std::string> stop;
  int code = kExitOk;
  try {
    pts = continue_in_gamma(l.cfg, range, a.k_seed, a.omega_seed, opts);
  } catch (const CurveTerminated& e) {
    pts = e.partial();
    stop = e.what();
    const double last = e.last_good_log10_gamma();
    const double covered = std::isnan(last) ? 0.0 : std::abs(last - a.lg_min);
    if (covered < 0.1 * std::abs(a.lg_max - a.lg_min)) code = kExitContinuation;
    err << "trace: " << e.what() << "\n";
  }
  Sink sink(g.out_path, out);
  auto& os = sink.stream();
  m.write(os, l, {sink.name()});
  os << "# seed: k_hat=" << num(a.k_seed) << " omega_hat=" << num(a.omega_seed)
     << " require_admissible=" << (opts.newton.require_admissible ? 1 : 0) << "\n";
  if (stop) os << "# terminated: " << *stop << "\n";
  os << "log10_gamma,omega_hat,k_hat,residual_norm\n";
  for (const auto& p : pts)
    os << num(p.log10_gamma) << "," << num(p.omega_hat) << "," << num(p.k_hat) << "," << num(p.newton_residual)
       << "\n";
  return code;
}

struct ProfileArgs {
  double k = 0.0, omega = 0.0;
  int periods = 5, samples = 41;
  double depth = 5.0;
  int lorentz_samples = 201;
};

int cmd_profile(const Globals& g, const Manifest& m, const ProfileArgs& a, std::ostream& out, std::ostream& err) {
  const Loaded l = load(g, true);
  const WaveCoordinates w{a.k, a.omega};
  FieldProfile prof;
  try {
    prof = two_sided_profile(l.cfg, w, a.periods, a.samples, a.depth, a.lorentz_samples);
  } catch (const NotDecaying& e) {
    err << "profile: not decaying on the "
        << (e.side() == NotDecaying::Side::Stratified ? "stratified" : "Lorentz") << " side: " << e.what() << "\n";
    return kExitInadmissible;
  } catch (const PoleEncountered& e) {
    err << "profile: " << e.what() << "\n";
    return kExitInadmissible;
  }
  double rnorm = std::numeric_limits<double>::quiet_NaN();
  try {
    rnorm = residual(l.cfg, w).scaled_norm();
  } catch (const Error&) {
  }
  Sink sink(g.out_path, out);
  auto& os = sink.stream();
  m.write(os, l, {sink.name()});
  os << "# point: k_hat=" << num(a.k) << " omega_hat=" << num(a.omega) << " residual_norm=" << num(rnorm) << "\n";
  os << "# fields: E1 scaled by v/eta0 (TE); for TM the columns hold H1 and E2 scaled alike\n";
  write_profile_csv(os, prof);
  return kExitOk;
}

int cmd_validate(const Globals& g, std::ostream& out) {
  const Loaded l = load(g, false);
  const auto violations = config_violations(l.cfg);
  const auto report = run_validation(l.cfg, violations);
  Sink sink(g.out_path, out);
  auto& os = sink.stream();
  write_validation_table(os, report);
  os << validation_json(report) << "\n";
  if (!violations.empty()) return kExitConfig;
  return report.all_pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Surface waves at a stratified / Lorentz interface", "surfwave"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--out", g.out_path, "output file (default stdout)");
  app.add_option("--set", g.sets, "dotted-path override key=value")->allow_extra_args(false);
  app.add_flag("--no-timestamp", g.no_timestamp, "omit the timestamp header line");
  app.set_version_flag("--version", kToolVersion);

  PermittivityArgs pa;
  auto* perm = app.add_subcommand("permittivity", "tabulate eps_L(Omega)");
  perm->add_option("--omega-min", pa.omega_min);
  perm->add_option("--omega-max", pa.omega_max);
  perm->add_option("--n", pa.n);

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "lossless dispersion branches");
  scan->add_option("--k-min", sa.k_min);
  scan->add_option("--k-max", sa.k_max);
  scan->add_option("--k-n", sa.k_n);
  scan->add_option("--omega-min", sa.omega_min);
  scan->add_option("--omega-max", sa.omega_max);
  scan->add_option("--omega-n", sa.omega_n);
  scan->add_option("--polarization", sa.polarization)->check(CLI::IsMember({"TE", "TM", "both"}));
  scan->add_flag("--no-row-pass", sa.no_row_pass);
  scan->add_flag("--no-refine", sa.no_refine);
  scan->add_option("--threads", sa.threads);

  TraceArgs ta;
  auto* trace = app.add_subcommand("trace", "continue a root in log10(Gamma)");
  trace->add_option("--log10-gamma-min", ta.lg_min);
  trace->add_option("--log10-gamma-max", ta.lg_max);
  trace->add_option("--n", ta.n);
  trace->add_option("--k-seed", ta.k_seed)->required();
  trace->add_option("--omega-seed", ta.omega_seed)->required();
  trace->add_flag("--allow-inadmissible", ta.allow_inadmissible);
  trace->add_option("--max-jump", ta.max_jump);

  ProfileArgs pr;
  auto* prof = app.add_subcommand("profile", "two-sided field profile at an admissible point");
  prof->add_option("--k", pr.k)->required();
  prof->add_option("--omega", pr.omega)->required();
  prof->add_option("--periods", pr.periods);
  prof->add_option("--samples", pr.samples);
  prof->add_option("--depth", pr.depth);
  prof->add_option("--lorentz-samples", pr.lorentz_samples);

  auto* val = app.add_subcommand("validate", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  const Manifest manifest(g, joined(argc, argv));
  try {
    if (*perm) return cmd_permittivity(g, manifest, pa, out);
    if (*scan) return cmd_scan(g, manifest, sa, out, err);
    if (*trace) return cmd_trace(g, manifest, ta, out, err);
    if (*prof) return cmd_profile(g, manifest, pr, out, err);
    if (*val) return cmd_validate(g, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitConfig;
}

}  // namespace surfwave
