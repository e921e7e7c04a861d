#pragma once

#include <filesystem>
#include <vector>

#include "betaplane/spectral_field.hpp"

namespace betaplane::lp {

struct LPIndex {
  int k = 0;
  int j = 0;
  /// (k, j) belongs to the index set: j >= 0 and k + j >= 0.
  bool admissible() const { return j >= 0 && k + j >= 0; }
  friend bool operator==(const LPIndex&, const LPIndex&) = default;
};

struct KRange {
  int lo = 0;
  int hi = 0;
};

/// Dyadic levels whose shells meet the nonzero lattice modes of the grid
/// (from below k_min up to the corner of the mode box).
KRange resolved_k_range(const GridSpec& grid);
/// False when 2^k lies outside [k_min/4, 4 * nyquist]; P_k is then zero.
bool pk_in_range(const GridSpec& grid, int k);
/// j_max = log2(l) + 2, rounded up.
int default_j_max(const GridSpec& grid);

SpectralField project_pk(const SpectralField& g, int k);
/// Sum of P_k over a <= k <= b.
SpectralField project_range(const SpectralField& g, int a, int b);

/// Physical-space cutoff phi_j^(k)(|x - c|) about the torus center c.
PhysicalField spatial_cutoff(const GridSpec& grid, int k, int j);

/// Q_jk g = P_[k-2,k+2](phi_j^(k) * P_k g). Throws IndexError off the index set.
SpectralField atom_qjk(const SpectralField& g, LPIndex idx);

/// (sum_xi (1 + |xi|^2)^s |g^(xi)|^2)^(1/2) under the field normalization.
double sobolev_norm(const SpectralField& g, double n_index);

struct AtomValue {
  LPIndex idx;
  double atom_l2 = 0.0;
  double weight = 0.0;
  double weighted_value = 0.0;
};

struct NormReport {
  double l2 = 0.0;
  double h_n = 0.0;
  double n_index = 4.0;
  double l_inf = 0.0;
  double x_norm = 0.0;
  double delta = 0.5e-4;
  KRange k_range;
  int j_max = 0;
  double captured_fraction = 1.0;
  LPIndex argmax;
  std::vector<AtomValue> per_atom;
};

/// 2^((k+j)(1+delta)) * 2^(4 max(k,0))
double x_weight(LPIndex idx, double delta);

/// Weighted supremum over the atoms (k, j) with k in k_range and
/// min_j(k) <= j <= j_max. Throws TruncationError (carrying the captured
/// fraction) when phi_{<= j_max} P_[lo,hi] g holds less than 1 - 1e-6 of the
/// L2 mass of g. jobs > 1 spreads the atom scan over worker threads.
NormReport x_norm(const SpectralField& g, double delta, int j_max, KRange k_range, double n_index = 4.0,
                  int jobs = 1);
/// Same with the resolved k range and default j_max of the grid.
NormReport x_norm(const SpectralField& g, double delta = 0.5e-4, double n_index = 4.0, int jobs = 1);

/// Writes <stem>_atoms.csv (k, j, atom_l2, weight, weighted_value) and
/// <stem>_summary.csv (one row: l2, h_n, l_inf, x_norm, delta, n_index, ...).
void write_report(const NormReport& r, const std::filesystem::path& atoms_csv,
                  const std::filesystem::path& summary_csv);

}  // namespace betaplane::lp
