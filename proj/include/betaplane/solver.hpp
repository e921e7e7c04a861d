#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "betaplane/sim_config.hpp"
#include "betaplane/spectral_field.hpp"

namespace betaplane::solver {

inline constexpr double kMaxCfl = 0.5;
inline constexpr double kTailAbort = 1e-4;

/// Integrating-factor RK4 (Lawson form) for d_t omega = L1 omega + N(omega),
/// N(omega) = -u.grad(omega). The linear flow is applied exactly through
/// cached multipliers exp(h L1), exp(h L1 / 2).
class Integrator {
 public:
  Integrator(const GridSpec& grid, double dt, bool linear_only = false);

  /// One step. Throws StepSizeError when dt * max|u| / dx exceeds 0.5.
  SpectralField step(const SpectralField& omega) const;
  /// Advective CFL number of omega for this step size.
  double cfl(const SpectralField& omega) const;
  double dt() const { return dt_; }

 private:
  SpectralField rhs(const SpectralField& omega) const;
  SpectralField apply(const std::vector<Complex>& e, const SpectralField& g) const;

  GridSpec grid_;
  double dt_;
  bool linear_only_;
  std::vector<Complex> e_half_;
  std::vector<Complex> e_full_;
};

SpectralField step(const SpectralField& omega, double dt, bool linear_only = false);

/// f(t) = exp(-t L1) omega(t).
SpectralField profile(const SpectralField& omega, double t);

struct DiagnosticsRecord {
  double t = 0.0;
  double l2_omega = 0.0;
  double l2_u = 0.0;
  double h_n = 0.0;
  double linf_omega = 0.0;
  double linf_du = 0.0;
  double x_norm_profile = 0.0;
  double tail_mass = 0.0;
  double cfl = 0.0;
};

DiagnosticsRecord diagnose(const SpectralField& omega, double t, const SimConfig& config, double cfl,
                           bool with_x_norm = true, int jobs = 1);

struct RunOptions {
  /// Called after every accepted step (and once at step 0) with the step
  /// index, the time and the current vorticity.
  std::function<void(int, double, const SpectralField&)> observer;
  bool x_norm_diagnostic = true;
  /// Also collect the dyadic profile windows (see ProfileWindow).
  bool profile_windows = false;
  int jobs = 1;
};

/// Change of the profile over the dyadic window [t1, t2] = [2^m, 2^(m+1)],
/// taken at the step times nearest to the window ends. x_norm_diff is NaN
/// when the X-norm scan truncates.
struct ProfileWindow {
  double t1 = 0.0;
  double t2 = 0.0;
  double l2_diff = 0.0;
  double x_norm_diff = 0.0;
};

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  bool aborted = false;
  std::string abort_reason;  // "tail-mass" or "cfl" when aborted
  double t_final = 0.0;
  int steps = 0;
  SpectralField final_omega{GridSpec{}};
  std::vector<ProfileWindow> windows;
};

/// Advances the configured initial condition to t_end with a uniform step
/// t_end / ceil(t_end / dt). Records diagnostics at step 0 and every
/// diag_stride steps (and at the final step). Stops early, keeping the
/// partial series, when the tail mass exceeds 1e-4 or the CFL bound fails.
RunResult run(const SimConfig& config, const RunOptions& options = {});
RunResult run(const SimConfig& config, const SpectralField& omega0, const RunOptions& options = {});

void write_diagnostics(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);
void write_profile_windows(const std::filesystem::path& path, const std::vector<ProfileWindow>& windows);

struct DtProfileScan {
  std::vector<double> times;
  /// ||P_0 d_t f(t)||_2 from centered differences of profiles.
  std::vector<double> values;
  /// ||P_0 N(omega(t))||_2, the same quantity evaluated directly.
  std::vector<double> direct;
  double slope = 0.0;
  double r2 = 0.0;
  bool all_zero = false;
  bool monotone = false;
  bool inconclusive = false;
  bool aborted = false;
  std::string abort_reason;
};

/// Fits log ||P_0 d_t f|| against log t over the given times. Times are
/// rounded to the nearest multiple of dt; the difference step is one dt.
DtProfileScan dt_profile_decay_scan(const SimConfig& config, const std::vector<double>& times, int jobs = 1);

void write_dt_profile_scan(const std::filesystem::path& path, const DtProfileScan& scan);

}  // namespace betaplane::solver
