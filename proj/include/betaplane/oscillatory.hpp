#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "betaplane/resonance.hpp"
#include "betaplane/spectral_field.hpp"

namespace betaplane::osc {

// ---------------------------------------------------------------------------
// Linear dispersive decay

struct DecayProbe {
  int k = 0;
  double sup0 = 0.0;     // ||P_k g||_inf
  double l1_pk = 0.0;    // ||P_k g||_1
  std::vector<double> times;
  std::vector<double> sup;
  std::vector<double> ratio;  // sup * t / (2^(3k) ||P_k g||_1)
  std::vector<double> tail;
  double slope = 0.0;
  double r2 = 0.0;
  bool truncated = false;  // tail-mass guard cut the window short
  std::string warning;
};

/// sup_x |exp(t L1) P_k g| over the given times. The grid maximum is
/// refined by evaluating the Fourier series off-grid around it. Times past
/// the point where the tail mass exceeds 1e-4 are dropped.
DecayProbe semigroup_decay_probe(const SpectralField& g, int k, std::span<const double> times);

/// Max |f| sampled on the grid, refined by a pattern search on the Fourier
/// series around the grid argmax.
double refined_sup(const SpectralField& f);

void write_decay_probe(const std::filesystem::path& path, const DecayProbe& probe);

using Profile = std::function<std::complex<double>(Vec2)>;

/// (2 pi)^-1 * integral of exp(i x.xi - i t L(xi)) ghat(xi) over the annulus
/// r_lo <= |xi| <= r_hi, in polar coordinates; real part returned.
double semigroup_quadrature(const Profile& ghat, double r_lo, double r_hi, double t, Vec2 x, double rel_tol = 1e-11);

/// |det Hess L(xi)|, L(xi) = xi1 / |xi|^2, from fourth-order finite differences.
double hessian_check(Vec2 xi);

// ---------------------------------------------------------------------------
// Time decomposition of [0, t]

/// tau_0 = chi(s), tau_m = (chi(s / 2^m) - chi(s / 2^(m-1))) sigma(s) for
/// 1 <= m <= L, tau_{L+1} = 1 - sigma(s), with chi(u) = phi(5u/4),
/// sigma = 1 on [0, t-2] and 0 on [t-1, t], L = ceil(log2(max(t, 2))).
class TimeWindow {
 public:
  explicit TimeWindow(double t);
  int pieces() const { return levels_ + 2; }
  int levels() const { return levels_; }
  double t() const { return t_; }
  double tau(int m, double s) const;
  double sum(double s) const;
  /// Interval outside which tau_m vanishes.
  std::pair<double, double> support(int m) const;

 private:
  double sigma(double s) const;
  double t_;
  int levels_;
};

// ---------------------------------------------------------------------------
// Localized bilinear operators

struct LocalizationIndex {
  int m = 0;
  int k = 0;
  int k1 = 0;
  int k2 = 0;
  std::optional<int> ell;
  std::optional<int> p;
  std::optional<int> r;
  std::optional<int> q;
  /// ell >= k1 + 20: the operator is empty by the vanishing rule.
  bool vanishes() const { return ell && *ell >= k1 + 20; }
};

enum class SymbolKind { original, symmetrized, unit };
double symbol_value(SymbolKind kind, const resonance::FreqPair& p);

struct BilinearOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-15;
  int min_panels = 4;
};

/// Integral over eta of exp(i s Phi) m(xi, eta) phi_ell(xi - 2 eta) phi_p(Phi)
/// phi_r(eta - 2 xi) phi_k1(xi - eta) fhat(xi - eta) phi_k2(eta) ghat(eta),
/// times phi_k(xi). Missing ell / p / r mean the cutoff is omitted.
std::complex<double> bilinear_at(const Profile& f, const Profile& g, double s, const LocalizationIndex& loc,
                                 SymbolKind kind, Vec2 xi, const BilinearOptions& opts = {});

struct BilinearResult {
  SpectralField out;
  bool empty = false;
  double worst_rel_change = 0.0;
};

/// bilinear_at on every lattice mode of `grid` inside the P_k annulus.
BilinearResult bilinear_localized(const Profile& f, const Profile& g, double s, const LocalizationIndex& loc,
                                  SymbolKind kind, const GridSpec& grid, const BilinearOptions& opts = {},
                                  int jobs = 1);

// ---------------------------------------------------------------------------
// Sublevel sets and integration by parts

struct SublevelResult {
  double measure = 0.0;
  double bound_shape = 0.0;  // 2^(lambda - mu) R
  double ratio = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo measure of {x in B_R(center): |F| <= 2^lambda, |grad F| >= 2^mu}.
SublevelResult sublevel_measure(const std::function<double(Vec2)>& F, const std::function<Vec2(Vec2)>& grad_F,
                                Vec2 center, double R, double lambda, double mu, std::size_t samples,
                                std::uint64_t seed);

struct IbpProbe {
  std::string amplitude;
  std::string phase;
  int M = 0;
  std::vector<double> K;
  std::vector<double> values;
  double g_l1 = 0.0;
  double floor = 0.0;     // values below this are excluded from the fit
  bool nonstationary = false;  // |grad F| >= 1 on the amplitude support
  int fitted = 0;
  double slope = 0.0;
  double r2 = 0.0;
  bool partial = false;   // some K hit the floor
};

/// Amplitudes: "annulus" (exp(-1/(1-s^2)), s = |x| - 2, on 1 < |x| < 3) and
/// "disc" (exp(-1/(1-|x|^2)) on |x| < 1). Phases: "linear" (F = x1) and
/// "quadratic" (F = |x|^2 / 2). Evaluates integral exp(i K F) g dx; panel
/// doubling stops once the change is below floor_rel * ||g||_1, the level at
/// which summation round-off dominates.
std::complex<double> ibp_integral(const std::string& amplitude, const std::string& phase, double K,
                                  double floor_rel = 1e-13);
IbpProbe ibp_decay_probe(const std::string& amplitude, const std::string& phase, std::span<const double> K_values,
                         int M, double floor_rel = 1e-13);

void write_ibp_probe(const std::filesystem::path& path, const IbpProbe& probe);

// ---------------------------------------------------------------------------
// TT* kernel

struct TtStarSpec {
  Vec2 xi0{1.0, 1.0};
  double R = 0.25;
  int p = -1;
  int q = 0;
  std::string rho = "annular";
};

/// Amplitude rho(xi, eta): "annular" is phi_[-1,1](|eta|) phi_{>=0}(|xi - eta|)
/// phi_{>=0}(|xi - 2 eta|) phi_{>=0}(|2 xi - eta|); "zero" is identically 0.
double ttstar_rho(const std::string& tag, Vec2 xi, Vec2 eta);

/// S(xi, xi') of the TT* composition, by converged quadrature over eta.
std::complex<double> ttstar_kernel_eval(const TtStarSpec& spec, Vec2 xi, Vec2 xi_prime, double s,
                                        double rel_tol = 1e-7);

}  // namespace betaplane::osc
