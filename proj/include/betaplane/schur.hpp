#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "betaplane/oscillatory.hpp"

namespace betaplane::schur {

enum class Family {
  /// phi_p(Phi) phi_ell(xi - 2eta) phi_r(eta - 2xi) phi_k(xi) phi_a(xi - eta) phi_b(eta)
  full,
  /// the same without the phi_r factor
  no_r,
  /// phi(|xi - xi0| / R) rho(xi, eta) phi_q(xi1 - eta1) phi_{<=p}(Phi), the
  /// one-sided factor of the TT* kernel
  ttstar,
};

struct KernelSpec {
  Family which = Family::full;
  int p = 0;
  int ell = 0;
  int r = 0;
  int k = 0;
  int a = 0;
  int b = 0;
  osc::TtStarSpec tt;  // used by Family::ttstar (its p and q are tt.p, tt.q)

  std::string label() const;
};

double kernel(const KernelSpec& spec, Vec2 xi, Vec2 eta);

/// Right-hand side shape of the Schur bound for the full and no_r families:
/// full: 2^(p + (k + b - ell - r)/2 + 2a) 2^(min(ell, r, a, b)/2 + min(ell, r, k, a)/2)
/// no_r: 2^(p + (k + b - ell + 3a)/2) 2^(min(ell, a, b)/2 + min(ell, k, a)/2)
double bound_shape(const KernelSpec& spec);

/// integral of K(xi, .) and of K(., eta), tensor Gauss-Legendre with about
/// `resolution` nodes per axis over the support box.
double row_mass(const KernelSpec& spec, Vec2 xi, int resolution);
double col_mass(const KernelSpec& spec, Vec2 eta, int resolution);

struct SchurEstimate {
  double row_sup = 0.0;
  double col_sup = 0.0;
  double value = 0.0;         // sqrt(row_sup * col_sup) at the doubled resolution
  double coarse_value = 0.0;  // the same at the base resolution
  double rel_change = 0.0;
  bool unreliable = false;    // rel_change > 10%
  bool empty = false;
  Vec2 row_arg;
  Vec2 col_arg;
  int resolution = 0;
};

/// Schur norm sqrt(sup_xi int K d eta * sup_eta int K d xi). The outer sup
/// is located on a (resolution/4)^2 grid over the outer support and refined
/// by a local pattern search; the inner integrals at the maximizers are then
/// recomputed at twice the resolution. resolution must be >= 64.
SchurEstimate schur_norm_estimate(const KernelSpec& spec, int resolution = 64);

struct SweepRow {
  KernelSpec spec;
  SchurEstimate estimate;
  double shape = 0.0;
  double ratio = 0.0;         // value / shape
  double coarse_ratio = 0.0;  // coarse_value / shape
};

struct LinearityPair {
  KernelSpec lower;  // p
  double ratio = 0.0;  // estimate(p + 1) / estimate(p)
};

struct SweepSummary {
  std::vector<SweepRow> rows;
  double C = 0.0;         // max ratio at the doubled resolution
  double C_coarse = 0.0;  // max ratio at the base resolution
  int unreliable = 0;
  std::vector<LinearityPair> linearity;
};

/// Nonempty (p, ell, r, k, a, b) tuples of the full family in [lo, hi]^6,
/// found by sampling frequency triples xi = (xi - eta) + eta; `count` of them
/// are drawn with the given seed.
std::vector<KernelSpec> select_tuples(std::size_t count, int lo, int hi, std::uint64_t seed);

/// Geometries (ell, r, k, a, b) for which the level sets of Phi cross the
/// support and stay thin: consecutive p in [lo, hi] with 2^(p+1) well below
/// the range of |Phi| on the support.
std::vector<KernelSpec> linear_regime_ladder(int lo, int hi, std::uint64_t seed, std::size_t max_geometries);

/// The ladder entries are estimated at ladder_resolution (0: same as
/// resolution); their thin phase bands need finer inner grids.
SweepSummary schur_sweep(const std::vector<KernelSpec>& tuples, const std::vector<KernelSpec>& ladder,
                         int resolution, int jobs = 1, int ladder_resolution = 0);

void write_sweep(const std::filesystem::path& path, const SweepSummary& summary);

}  // namespace betaplane::schur
