#include "cli.hpp"

#include <fftw3.h>

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "betaplane/csv.hpp"
#include "betaplane/errors.hpp"
#include "betaplane/initial_conditions.hpp"
#include "betaplane/littlewood_paley.hpp"
#include "betaplane/oscillatory.hpp"
#include "betaplane/parallel.hpp"
#include "betaplane/resonance.hpp"
#include "betaplane/schur.hpp"
#include "betaplane/sim_config.hpp"
#include "betaplane/snapshot.hpp"
#include "betaplane/solver.hpp"
#include "betaplane/spectral_ops.hpp"

namespace betaplane::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) { return csv::format(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }
std::string fmt(const std::string& v) { return v; }
template <class T>
std::string fmt(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

// Reads keys through KvConfig and remembers the effective value of each one,
// so the manifest can be fed back as a config.
class Params {
 public:
  explicit Params(KvConfig& kv) : kv_(kv) {}

  template <class T>
  T get(const std::string& key, const T& fallback) {
    T v = kv_.get(key, fallback);
    echo_ << key << " = " << fmt(v) << "\n";
    return v;
  }
  std::string get(const std::string& key, const char* fallback) { return get(key, std::string(fallback)); }

  SimConfig sim(const SimConfig& base) {
    SimConfig c = SimConfig::from_kv(kv_, base);
    echo_ << c.to_kv();
    return c;
  }

  Vec2 vec(const std::string& key, Vec2 fallback) {
    const auto v = get(key, std::vector<double>{fallback.x, fallback.y});
    if (v.size() != 2) throw ParseError(key + ": expected two components");
    return {v[0], v[1]};
  }

  void finish() const { kv_.finish(); }
  std::string echo() const { return echo_.str(); }

 private:
  KvConfig& kv_;
  std::ostringstream echo_;
};

// Output files of one invocation. A run index suffix is chosen once so that
// none of the planned files exists; files are never overwritten.
class RunDir {
 public:
  RunDir(fs::path dir, const std::vector<std::string>& names) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
    std::vector<std::string> all = names;
    all.push_back("manifest.txt");
    for (index_ = 0;; ++index_) {
      bool free = true;
      for (const auto& n : all) free = free && !fs::exists(path_for(n));
      if (free) break;
    }
  }

  fs::path path(const std::string& name) {
    const fs::path p = path_for(name);
    if (fs::exists(p)) throw PreconditionError("refusing to overwrite " + p.string());
    written_.push_back(p.filename().string());
    return p;
  }

  int index() const { return index_; }
  const std::vector<std::string>& written() const { return written_; }

 private:
  fs::path path_for(const std::string& name) const {
    if (index_ == 0) return dir_ / name;
    const fs::path n(name);
    return dir_ / (n.stem().string() + "." + std::to_string(index_) + n.extension().string());
  }

  fs::path dir_;
  int index_ = 0;
  std::vector<std::string> written_;
};

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, n == 1 ? 0.0 : double(i) / (n - 1));
  return v;
}

struct Context {
  std::string command;
  Params& params;
  RunDir& run;
  int jobs;
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> notes;  // extra manifest lines
};

// ---- commands ------------------------------------------------------------

void run_sim(Context& c) {
  const SimConfig cfg = c.params.sim({});
  const std::string snapshot_in = c.params.get("snapshot_in", "");
  const bool x_diag = c.params.get("x_norm_diagnostic", true);
  const bool snap_out = c.params.get("write_snapshot", true);
  const bool windows = c.params.get("profile_windows", false);
  c.params.finish();
  cfg.validate();

  solver::RunOptions opts;
  opts.x_norm_diagnostic = x_diag;
  opts.profile_windows = windows;
  opts.jobs = c.jobs;
  solver::RunResult res;
  if (snapshot_in.empty()) {
    res = solver::run(cfg, opts);
  } else {
    const PhysicalField f = read_snapshot(snapshot_in);
    if (!(f.grid().n == cfg.grid.n && f.grid().l == cfg.grid.l)) {
      throw ConfigurationError("snapshot grid does not match n and l of the config");
    }
    const SpectralField raw = SpectralField::from_physical(f);
    SpectralField w(cfg.grid, {raw.coeffs().begin(), raw.coeffs().end()});
    w(0, 0) = Complex{};
    res = solver::run(cfg, w, opts);
  }
  solver::write_diagnostics(c.run.path("diagnostics.csv"), res.records);
  if (snap_out) write_snapshot(c.run.path("final.bpf"), res.final_omega.to_physical());
  if (windows) solver::write_profile_windows(c.run.path("profile_windows.csv"), res.windows);
  c.notes.push_back("steps = " + std::to_string(res.steps));
  c.notes.push_back("t_final = " + fmt(res.t_final));
  if (res.aborted) {
    c.notes.push_back("aborted = " + res.abort_reason);
    c.err << "warning: run aborted at t=" << res.t_final << " (" << res.abort_reason << ")\n";
  }
  c.out << "steps " << res.steps << " t_final " << fmt(res.t_final) << "\n";
}

SimConfig semigroup_defaults() {
  SimConfig s;
  s.grid.n = 1024;
  s.grid.l = 1024.0;
  s.ic_kind = "gaussian-derivative";
  s.ic_scale = 2.0;
  s.amplitude = 1.0;
  return s;
}

SimConfig dt_profile_defaults() {
  SimConfig s;
  s.grid.n = 256;
  s.grid.l = 192.0;
  s.ic_kind = "gaussian-derivative";
  s.ic_scale = 2.0;
  s.ic_order = 6;
  s.ic_aniso = 1;
  s.amplitude = 1e-3;
  s.dt = 0.05;
  return s;
}

void decay_scan(Context& c) {
  const std::string probe = c.params.get("probe", "semigroup");
  if (probe == "semigroup") {
    const SimConfig cfg = c.params.sim(semigroup_defaults());
    const int k = c.params.get("k", 0);
    const auto times = c.params.get("times", logspace(10.0, 100.0, 10));
    c.params.finish();
    cfg.validate();
    const SpectralField g = make_initial_condition(cfg);
    const osc::DecayProbe res = osc::semigroup_decay_probe(g, k, times);
    osc::write_decay_probe(c.run.path("decay.csv"), res);
    if (!res.warning.empty()) {
      c.err << "warning: " << res.warning << "\n";
      c.notes.push_back("warning = " + res.warning);
    }
    c.out << "fitted_slope " << fmt(res.slope) << " r2 " << fmt(res.r2) << "\n";
  } else if (probe == "dt-profile") {
    const SimConfig cfg = c.params.sim(dt_profile_defaults());
    const auto times = c.params.get("times", std::vector<double>{4.0, 8.0, 16.0, 32.0});
    c.params.finish();
    cfg.validate();
    const solver::DtProfileScan res = solver::dt_profile_decay_scan(cfg, times, c.jobs);
    solver::write_dt_profile_scan(c.run.path("dt_profile.csv"), res);
    if (res.aborted) c.err << "warning: scan aborted (" << res.abort_reason << ")\n";
    if (res.inconclusive) c.err << "warning: inconclusive fit\n";
    c.out << "fitted_slope " << fmt(res.slope) << " r2 " << fmt(res.r2) << "\n";
  } else {
    throw ParseError("probe: expected semigroup or dt-profile, got '" + probe + "'");
  }
}

void nullform_check(Context& c) {
  const Vec2 eta = c.params.vec("eta", {1.0, 0.5});
  const Vec2 dir = c.params.vec("direction", {1.0, 0.0});
  const auto eps = c.params.get("eps", logspace(1e-3, 1e-1, 9));
  c.params.finish();

  struct Case {
    const char* name;
    resonance::PairSymbol symbol;
  };
  const Case cases[] = {
      {"symmetrized", [](const resonance::FreqPair& p) { return resonance::symbol_sym(p); }},
      {"original", [](const resonance::FreqPair& p) { return resonance::symbol_orig(p); }},
      {"constant", [](const resonance::FreqPair&) { return 1.0; }},
  };
  csv::Writer w(c.run.path("nullform.csv"), {"symbol", "eps", "sup_value", "fitted_slope", "r2", "degenerate"});
  for (const auto& cs : cases) {
    const resonance::NullScan s = resonance::null_order_scan(cs.symbol, eta, dir, eps);
    for (std::size_t i = 0; i < s.eps.size(); ++i) {
      w.row(std::string(cs.name), s.eps[i], s.sup_values[i], s.slope, s.r2, s.degenerate);
    }
    c.out << cs.name << " fitted_slope " << fmt(s.slope) << "\n";
  }
}

void curvature_check(Context& c) {
  const int samples = c.params.get("samples", 100000);
  const double box = c.params.get("box", 4.0);
  const double margin = c.params.get("margin", 1e-3);
  const std::uint64_t seed = c.params.get("seed", std::uint64_t{1});
  const double tol = c.params.get("tolerance", 1e-6);
  c.params.finish();
  if (samples <= 0) throw ConfigurationError("samples must be positive");

  const auto pairs = resonance::sample_pairs(static_cast<std::size_t>(samples), box, margin, seed);
  std::vector<resonance::ResonanceDiagnostics> rows(pairs.size());
  std::vector<double> grad_err(pairs.size());
  parallel_for(pairs.size(), c.jobs, [&](std::size_t i) {
    rows[i] = resonance::curvature(pairs[i]);
    grad_err[i] = resonance::grad_check(pairs[i]);
  });
  resonance::write_scan(c.run.path("resonance_scan.csv"), rows);
  double worst = 0.0, worst_scaled = 0.0, worst_grad = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    worst = std::max(worst, rows[i].identity_residual);
    worst_scaled = std::max(worst_scaled, rows[i].identity_residual / (1.0 + std::abs(pairs[i].xi.x - pairs[i].eta.x)));
    worst_grad = std::max(worst_grad, grad_err[i]);
  }
  c.out << "max_identity_residual " << fmt(worst) << "\n";
  c.out << "max_scaled_residual " << fmt(worst_scaled) << "\n";
  c.out << "max_gradient_rel_error " << fmt(worst_grad) << "\n";
  c.notes.push_back("max_scaled_residual = " + fmt(worst_scaled));
  if (worst_scaled > tol) {
    throw ConvergenceError("curvature identity residual " + fmt(worst_scaled) + " exceeds " + fmt(tol), worst_scaled);
  }
}

void schur_bench(Context& c) {
  const int count = c.params.get("tuples", 240);
  const int lo = c.params.get("lo", -3);
  const int hi = c.params.get("hi", 3);
  const std::uint64_t seed = c.params.get("seed", std::uint64_t{1});
  const int resolution = c.params.get("resolution", 64);
  const int ladder_resolution = c.params.get("ladder_resolution", 128);
  const int geometries = c.params.get("ladder_geometries", 8);
  c.params.finish();
  if (count < 0 || geometries < 0) throw ConfigurationError("tuples and ladder_geometries must be >= 0");
  if (lo > hi) throw ConfigurationError("lo must not exceed hi");
  if (ladder_resolution < 64) throw PreconditionError("ladder_resolution must be >= 64");

  const auto tuples = schur::select_tuples(static_cast<std::size_t>(count), lo, hi, seed);
  const auto ladder = schur::linear_regime_ladder(lo, hi, seed + 1, static_cast<std::size_t>(geometries));
  const schur::SweepSummary sum = schur::schur_sweep(tuples, ladder, resolution, c.jobs, ladder_resolution);
  schur::write_sweep(c.run.path("schur_sweep.csv"), sum);
  csv::Writer w(c.run.path("schur_linearity.csv"), {"p", "ell", "r", "k", "a", "b", "doubling_ratio"});
  double lo_ratio = 0.0, hi_ratio = 0.0;
  for (std::size_t i = 0; i < sum.linearity.size(); ++i) {
    const auto& l = sum.linearity[i];
    w.row(l.lower.p, l.lower.ell, l.lower.r, l.lower.k, l.lower.a, l.lower.b, l.ratio);
    lo_ratio = i ? std::min(lo_ratio, l.ratio) : l.ratio;
    hi_ratio = i ? std::max(hi_ratio, l.ratio) : l.ratio;
  }
  c.out << "tuples " << tuples.size() << " fitted_C " << fmt(sum.C) << " C_coarse " << fmt(sum.C_coarse)
        << " unreliable " << sum.unreliable << "\n";
  c.out << "doubling_ratio_range " << fmt(lo_ratio) << " " << fmt(hi_ratio) << "\n";
}

void ibp_probe(Context& c) {
  const std::string amplitude = c.params.get("amplitude", "annulus");
  const std::string phase = c.params.get("phase", "linear");
  const auto K = c.params.get("K", logspace(10.0, 1000.0, 13));
  const int M = c.params.get("M", 6);
  const double floor_rel = c.params.get("floor_rel", 1e-13);
  c.params.finish();
  const osc::IbpProbe res = osc::ibp_decay_probe(amplitude, phase, K, M, floor_rel);
  osc::write_ibp_probe(c.run.path("ibp.csv"), res);
  if (res.partial) c.err << "warning: quadrature floor reached, partial fit over " << res.fitted << " points\n";
  c.out << "fitted_slope " << fmt(res.slope) << " r2 " << fmt(res.r2) << " nonstationary "
        << (res.nonstationary ? 1 : 0) << "\n";
}

void ttstar_probe(Context& c) {
  osc::TtStarSpec spec;
  spec.xi0 = c.params.vec("xi0", spec.xi0);
  spec.R = c.params.get("R", spec.R);
  spec.p = c.params.get("p", spec.p);
  spec.q = c.params.get("q", spec.q);
  spec.rho = c.params.get("rho", spec.rho);
  const Vec2 default_dir = perp(resonance::dispersion_gradient(spec.xi0)) * (1.0 / norm(resonance::dispersion_gradient(spec.xi0)));
  const Vec2 dir = c.params.vec("direction", default_dir);
  const double sep = c.params.get("separation", 0.5 * spec.R);
  const auto s_values = c.params.get("s", std::vector<double>{64.0, 256.0, 1024.0});
  const double rel_tol = c.params.get("rel_tol", 1e-7);
  c.params.finish();
  if (norm(dir) == 0.0) throw ConfigurationError("direction must be nonzero");

  const Vec2 unit = dir * (1.0 / norm(dir));
  const Vec2 xi = spec.xi0 - unit * (0.5 * sep);
  const Vec2 xip = spec.xi0 + unit * (0.5 * sep);
  schur::KernelSpec ks;
  ks.which = schur::Family::ttstar;
  ks.tt = spec;
  const double diag_bound = schur::row_mass(ks, spec.xi0, 128);

  std::vector<std::complex<double>> off(s_values.size()), diag(s_values.size());
  parallel_for(s_values.size(), c.jobs, [&](std::size_t i) {
    off[i] = osc::ttstar_kernel_eval(spec, xi, xip, s_values[i], rel_tol);
    diag[i] = osc::ttstar_kernel_eval(spec, spec.xi0, spec.xi0, s_values[i], rel_tol);
  });
  csv::Writer w(c.run.path("ttstar.csv"),
                {"s", "separation", "re", "im", "abs", "diag_abs", "diag_bound"});
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    w.row(s_values[i], sep, off[i].real(), off[i].imag(), std::abs(off[i]), std::abs(diag[i]), diag_bound);
    c.out << "s " << fmt(s_values[i]) << " abs " << fmt(std::abs(off[i])) << "\n";
  }
}

void lp_report(Context& c) {
  const SimConfig cfg = c.params.sim({});
  const std::string snapshot_in = c.params.get("snapshot_in", "");
  const lp::KRange def_range = lp::resolved_k_range(cfg.grid);
  const int j_max = c.params.get("j_max", lp::default_j_max(cfg.grid));
  const int k_lo = c.params.get("k_lo", def_range.lo);
  const int k_hi = c.params.get("k_hi", def_range.hi);
  c.params.finish();
  cfg.validate();

  SpectralField g(cfg.grid);
  if (snapshot_in.empty()) {
    g = make_initial_condition(cfg);
  } else {
    const PhysicalField f = read_snapshot(snapshot_in);
    if (!(f.grid().n == cfg.grid.n && f.grid().l == cfg.grid.l)) {
      throw ConfigurationError("snapshot grid does not match n and l of the config");
    }
    const SpectralField raw = SpectralField::from_physical(f);
    g = SpectralField(cfg.grid, {raw.coeffs().begin(), raw.coeffs().end()});
  }
  const lp::NormReport r = lp::x_norm(g, cfg.delta, j_max, {k_lo, k_hi}, cfg.n_index, c.jobs);
  lp::write_report(r, c.run.path("lp_atoms.csv"), c.run.path("lp_summary.csv"));
  c.out << "x_norm " << fmt(r.x_norm) << " captured_fraction " << fmt(r.captured_fraction) << " argmax " << r.argmax.k
        << " " << r.argmax.j << "\n";
}

struct Command {
  std::function<void(Context&)> body;
  std::vector<std::string> outputs;
};

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"run-sim", {run_sim, {"diagnostics.csv", "final.bpf", "profile_windows.csv"}}},
      {"decay-scan", {decay_scan, {"decay.csv", "dt_profile.csv"}}},
      {"nullform-check", {nullform_check, {"nullform.csv"}}},
      {"curvature-check", {curvature_check, {"resonance_scan.csv"}}},
      {"schur-bench", {schur_bench, {"schur_sweep.csv", "schur_linearity.csv"}}},
      {"ibp-probe", {ibp_probe, {"ibp.csv"}}},
      {"ttstar-probe", {ttstar_probe, {"ttstar.csv"}}},
      {"lp-report", {lp_report, {"lp_atoms.csv", "lp_summary.csv"}}},
  };
  return table;
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_manifest(const fs::path& path, const Context& c, const std::string& config_path, double wall,
                    const std::string& status) {
  std::ofstream m(path, std::ios::binary);
  m << "# betaplane " << BETAPLANE_VERSION << "\n";
  m << "# command = " << c.command << "\n";
  m << "# config = " << (config_path.empty() ? "<defaults>" : config_path) << "\n";
  m << "# run_index = " << c.run.index() << "\n";
  m << "# jobs = " << c.jobs << "\n";
  m << "# started = " << timestamp() << "\n";
  m << "# wall_seconds = " << fmt(wall) << "\n";
  m << "# status = " << status << "\n";
  m << "# fftw = " << fftw_version << "\n";
  m << "# boost = " << BOOST_LIB_VERSION << "\n";
  m << "# compiler = " << __VERSION__ << "\n";
  for (const auto& f : c.run.written()) m << "# output = " << f << "\n";
  for (const auto& n : c.notes) m << "# " << n << "\n";
  m << "# effective configuration (reusable as --config)\n";
  m << c.params.echo();
}

void report(std::ostream& err, int code, const std::string& kind, const std::string& message) {
  std::string flat = message;
  for (char& ch : flat) {
    if (ch == '\n') ch = ' ';
  }
  err << "error: code=" << code << " kind=" << kind << " message=" << flat << "\n";
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, cmd] : commands()) v.push_back(name);
    return v;
  }();
  return names;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"beta-plane simulator and dispersive analysis lab", "betaplane"};
  std::string command, config_path, out_dir;
  int jobs = 0;
  app.add_option("command", command, "one of: " + fmt(command_names()))->required()->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--jobs", jobs, "worker threads (default: BETAPLANE_THREADS or 1)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report(err, 2, "usage", e.what());
    return 2;
  }

  KvConfig kv;
  Params params(kv);
  std::optional<RunDir> run;
  std::optional<Context> ctx;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (!config_path.empty()) kv = KvConfig::load(config_path);
    const Command& cmd = commands().at(command);
    run.emplace(out_dir, cmd.outputs);
    ctx.emplace(Context{command, params, *run, resolve_jobs(jobs), out, err, {}});
    cmd.body(*ctx);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(run->path("manifest.txt"), *ctx, config_path, wall, "ok");
    return 0;
  } catch (const Error& e) {
    report(err, e.exit_code(), e.kind(), e.what());
    if (ctx) {
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      try {
        write_manifest(run->path("manifest.txt"), *ctx, config_path, wall,
                       "error code=" + std::to_string(e.exit_code()) + " kind=" + e.kind());
      } catch (const std::exception&) {
      }
    }
    return e.exit_code();
  } catch (const fs::filesystem_error& e) {
    report(err, 3, "io", e.what());
    return 3;
  } catch (const std::exception& e) {
    report(err, 1, "internal", e.what());
    return 1;
  }
}

}  // namespace betaplane::cli
