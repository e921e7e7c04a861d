#include "betaplane/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "betaplane/csv.hpp"
#include "betaplane/errors.hpp"
#include "betaplane/fit.hpp"
#include "betaplane/initial_conditions.hpp"
#include "betaplane/littlewood_paley.hpp"
#include "betaplane/spectral_ops.hpp"

namespace betaplane::solver {

namespace {
std::vector<Complex> exp_l1(const GridSpec& grid, double t) {
  std::vector<Complex> e(grid.size());
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      const Vec2 xi = grid.xi(i, j);
      const double k2 = norm2(xi);
      const double a = k2 == 0.0 ? 0.0 : -t * xi.x / k2;
      e[grid.index(i, j)] = {std::cos(a), std::sin(a)};
    }
  }
  return e;
}
}  // namespace

Integrator::Integrator(const GridSpec& grid, double dt, bool linear_only)
    : grid_(grid), dt_(dt), linear_only_(linear_only), e_half_(exp_l1(grid, 0.5 * dt)), e_full_(exp_l1(grid, dt)) {
  grid_.validate();
  if (!std::isfinite(dt)) throw ConfigurationError("integrator: dt must be finite");
}

SpectralField Integrator::apply(const std::vector<Complex>& e, const SpectralField& g) const {
  SpectralField out = g;
  auto c = out.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= e[k];
  return out;
}

SpectralField Integrator::rhs(const SpectralField& omega) const {
  if (linear_only_) return SpectralField(grid_);
  return spectral::transport_nonlinearity(omega);
}

double Integrator::cfl(const SpectralField& omega) const {
  return std::abs(dt_) * spectral::max_speed(spectral::biot_savart(omega)) / grid_.dx();
}

SpectralField Integrator::step(const SpectralField& omega) const {
  if (!(omega.grid() == grid_)) throw PreconditionError("step: grid mismatch");
  if (linear_only_) {
    spectral::require_mean_zero(omega, "step");
    return apply(e_full_, omega);
  }
  const double umax = spectral::max_speed(spectral::biot_savart(omega));
  if (std::abs(dt_) * umax / grid_.dx() > kMaxCfl) {
    std::ostringstream msg;
    msg << "step: dt = " << dt_ << " violates the CFL bound (max|u| = " << umax << ", dx = " << grid_.dx() << ")";
    throw StepSizeError(msg.str(), umax);
  }
  const double h = dt_;
  const SpectralField k1 = rhs(omega);
  SpectralField a = omega;
  a.axpy(0.5 * h, k1);
  const SpectralField k2 = rhs(apply(e_half_, a));
  SpectralField b = apply(e_half_, omega);
  b.axpy(0.5 * h, k2);
  const SpectralField k3 = rhs(b);
  SpectralField c = apply(e_full_, omega);
  c.axpy(h, apply(e_half_, k3));
  const SpectralField k4 = rhs(c);

  SpectralField mid = k2;
  mid += k3;
  SpectralField out = apply(e_full_, omega);
  out.axpy(h / 6.0, apply(e_full_, k1));
  out.axpy(h / 3.0, apply(e_half_, mid));
  out.axpy(h / 6.0, k4);
  out(0, 0) = Complex{};
  return out;
}

SpectralField step(const SpectralField& omega, double dt, bool linear_only) {
  return Integrator(omega.grid(), dt, linear_only).step(omega);
}

SpectralField profile(const SpectralField& omega, double t) { return spectral::l1_semigroup(omega, -t); }

DiagnosticsRecord diagnose(const SpectralField& omega, double t, const SimConfig& config, double cfl,
                           bool with_x_norm, int jobs) {
  DiagnosticsRecord r;
  r.t = t;
  r.cfl = cfl;
  const VelocityField u = spectral::biot_savart(omega);
  r.l2_omega = spectral::l2_norm(omega);
  r.l2_u = spectral::l2_norm(u);
  r.h_n = lp::sobolev_norm(omega, config.n_index);
  const PhysicalField phys = omega.to_physical();
  r.linf_omega = spectral::linf_norm(phys);
  r.linf_du = spectral::linf_velocity_gradient(u);
  r.tail_mass = spectral::tail_mass(phys);
  if (with_x_norm) {
    try {
      r.x_norm_profile = lp::x_norm(profile(omega, t), config.delta, config.n_index, jobs).x_norm;
    } catch (const TruncationError&) {
      r.x_norm_profile = std::numeric_limits<double>::quiet_NaN();
    }
  } else {
    r.x_norm_profile = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

RunResult run(const SimConfig& config, const RunOptions& options) {
  return run(config, make_initial_condition(config), options);
}

RunResult run(const SimConfig& config, const SpectralField& omega0, const RunOptions& options) {
  config.validate();
  if (!(omega0.grid() == config.grid)) throw PreconditionError("run: initial field grid differs from config");
  spectral::require_mean_zero(omega0, "run");
  const int nsteps = config.t_end > 0.0 ? static_cast<int>(std::ceil(config.t_end / config.dt - 1e-9)) : 0;
  const double h = nsteps > 0 ? config.t_end / nsteps : config.dt;
  const Integrator integrator(config.grid, h, config.linear_only);

  RunResult result;
  SpectralField omega = omega0;
  // Steps nearest to t = 1, 2, 4, ... within the run.
  std::vector<int> dyadic_steps;
  if (options.profile_windows) {
    for (double t = 1.0; t <= config.t_end * (1.0 + 1e-12); t *= 2.0) {
      const int s = static_cast<int>(std::lround(t / h));
      if (s >= 1 && (dyadic_steps.empty() || s > dyadic_steps.back())) dyadic_steps.push_back(s);
    }
  }
  std::vector<std::pair<double, SpectralField>> snaps;
  auto record = [&](double t) {
    result.records.push_back(
        diagnose(omega, t, config, integrator.cfl(omega), options.x_norm_diagnostic, options.jobs));
  };
  record(0.0);
  if (options.observer) options.observer(0, 0.0, omega);
  for (int s = 1; s <= nsteps; ++s) {
    try {
      omega = integrator.step(omega);
    } catch (const StepSizeError&) {
      result.aborted = true;
      result.abort_reason = "cfl";
      break;
    }
    const double t = s * h;
    result.steps = s;
    result.t_final = t;
    const double tail = spectral::tail_mass(omega.to_physical());
    const bool abort_now = tail > kTailAbort;
    if (s % config.diag_stride == 0 || s == nsteps || abort_now) record(t);
    if (options.observer) options.observer(s, t, omega);
    if (std::find(dyadic_steps.begin(), dyadic_steps.end(), s) != dyadic_steps.end()) {
      snaps.emplace_back(t, profile(omega, t));
    }
    if (abort_now) {
      result.aborted = true;
      result.abort_reason = "tail-mass";
      break;
    }
  }
  result.final_omega = omega;
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    ProfileWindow w;
    w.t1 = snaps[i - 1].first;
    w.t2 = snaps[i].first;
    const SpectralField d = snaps[i].second - snaps[i - 1].second;
    w.l2_diff = spectral::l2_norm(d);
    try {
      w.x_norm_diff = lp::x_norm(d, config.delta, config.n_index, options.jobs).x_norm;
    } catch (const TruncationError&) {
      w.x_norm_diff = std::numeric_limits<double>::quiet_NaN();
    }
    result.windows.push_back(w);
  }
  return result;
}

void write_profile_windows(const std::filesystem::path& path, const std::vector<ProfileWindow>& windows) {
  csv::Writer w(path, {"t1", "t2", "l2_diff", "x_norm_diff"});
  for (const auto& r : windows) w.row(r.t1, r.t2, r.l2_diff, r.x_norm_diff);
}

void write_diagnostics(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records) {
  csv::Writer w(path, {"t", "l2_omega", "l2_u", "h_n", "linf_omega", "linf_du", "x_norm_profile", "tail_mass", "cfl"});
  for (const auto& r : records) {
    w.row(r.t, r.l2_omega, r.l2_u, r.h_n, r.linf_omega, r.linf_du, r.x_norm_profile, r.tail_mass, r.cfl);
  }
}

DtProfileScan dt_profile_decay_scan(const SimConfig& config, const std::vector<double>& times, int jobs) {
  config.validate();
  if (times.empty()) throw PreconditionError("dt_profile_decay_scan: no times given");
  DtProfileScan scan;
  std::vector<int> centers;
  for (double t : times) {
    if (!(t >= 1.0)) throw PreconditionError("dt_profile_decay_scan: times must be >= 1");
    centers.push_back(static_cast<int>(std::lround(t / config.dt)));
  }
  const int last = *std::max_element(centers.begin(), centers.end()) + 1;
  SimConfig c = config;
  c.t_end = last * config.dt;
  c.diag_stride = std::max(last, 1);

  std::map<int, SpectralField> kept;
  RunOptions opts;
  opts.x_norm_diagnostic = false;
  opts.jobs = jobs;
  opts.observer = [&](int s, double, const SpectralField& w) {
    for (int m : centers) {
      if (s == m - 1 || s == m || s == m + 1) {
        kept.insert_or_assign(s, w);
        break;
      }
    }
  };
  const RunResult run_result = run(c, opts);
  scan.aborted = run_result.aborted;
  scan.abort_reason = run_result.abort_reason;

  const double h = config.dt;
  double scale = 0.0;
  for (int m : centers) {
    if (!kept.count(m - 1) || !kept.count(m + 1)) break;
    const double t = m * h;
    SpectralField diff = profile(kept.at(m + 1), t + h);
    diff -= profile(kept.at(m - 1), t - h);
    diff *= 1.0 / (2.0 * h);
    scan.times.push_back(t);
    scan.values.push_back(spectral::l2_norm(lp::project_pk(diff, 0)));
    const SpectralField n = config.linear_only ? SpectralField(config.grid)
                                                : spectral::transport_nonlinearity(kept.at(m));
    scan.direct.push_back(spectral::l2_norm(lp::project_pk(n, 0)));
    scale = std::max(scale, spectral::l2_norm(lp::project_pk(kept.at(m), 0)));
  }

  // Zero up to round-off of the difference quotient.
  const double floor = 1e-10 * scale / h;
  scan.all_zero = std::all_of(scan.values.begin(), scan.values.end(), [&](double v) { return v <= floor; });
  if (scan.all_zero || scan.values.size() < 2) {
    scan.inconclusive = !scan.all_zero;
    return scan;
  }
  scan.monotone = true;
  for (std::size_t i = 1; i < scan.values.size(); ++i) {
    if (!(scan.values[i] < scan.values[i - 1])) scan.monotone = false;
  }
  const LineFit f = fit_loglog(scan.times, scan.values);
  scan.slope = f.slope;
  scan.r2 = f.r2;
  scan.inconclusive = !scan.monotone || f.r2 < 0.9;
  return scan;
}

void write_dt_profile_scan(const std::filesystem::path& path, const DtProfileScan& scan) {
  csv::Writer w(path, {"t", "dt_profile_p0", "direct_p0", "fitted_slope", "r2", "inconclusive"});
  for (std::size_t i = 0; i < scan.times.size(); ++i) {
    w.row(scan.times[i], scan.values[i], scan.direct[i], scan.slope, scan.r2, scan.inconclusive);
  }
}

}  // namespace betaplane::solver
