#include "betaplane/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "betaplane/csv.hpp"
#include "betaplane/cutoff.hpp"
#include "betaplane/errors.hpp"
#include "betaplane/parallel.hpp"
#include "betaplane/spectral_ops.hpp"

namespace betaplane::lp {

namespace {

template <class F>
SpectralField radial_multiplier(const SpectralField& g, F&& weight) {
  const GridSpec& grid = g.grid();
  SpectralField out(grid);
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      const Complex c = g(i, j);
      if (c == Complex{}) continue;
      out(i, j) = weight(norm(grid.xi(i, j))) * c;
    }
  }
  return out;
}

PhysicalField multiply(const PhysicalField& a, const PhysicalField& b) {
  PhysicalField out(a.grid());
  for (std::size_t k = 0; k < out.values().size(); ++k) out.values()[k] = a.values()[k] * b.values()[k];
  return out;
}

double mass(const SpectralField& g) {
  const double n = spectral::l2_norm(g);
  return n * n;
}

}  // namespace

KRange resolved_k_range(const GridSpec& grid) {
  const int lo = static_cast<int>(std::floor(std::log2(grid.k_min()))) - 1;
  const int hi = static_cast<int>(std::ceil(std::log2(std::sqrt(2.0) * grid.nyquist())));
  return {lo, hi};
}

bool pk_in_range(const GridSpec& grid, int k) {
  const double s = std::ldexp(1.0, k);
  return s >= 0.25 * grid.k_min() && s <= 4.0 * grid.nyquist();
}

int default_j_max(const GridSpec& grid) { return static_cast<int>(std::ceil(std::log2(grid.l))) + 2; }

SpectralField project_pk(const SpectralField& g, int k) {
  if (!pk_in_range(g.grid(), k)) return SpectralField(g.grid());
  return radial_multiplier(g, [k](double r) { return cutoff::phi_k(r, k); });
}

SpectralField project_range(const SpectralField& g, int a, int b) {
  return radial_multiplier(g, [a, b](double r) { return cutoff::phi_range(r, a, b); });
}

PhysicalField spatial_cutoff(const GridSpec& grid, int k, int j) {
  PhysicalField out(grid);
  const Vec2 c = grid.center();
  for (int p = 0; p < grid.n; ++p) {
    for (int q = 0; q < grid.n; ++q) {
      out(p, q) = cutoff::phi_jk(norm(grid.position(p, q) - c), k, j);
    }
  }
  return out;
}

namespace {
SpectralField atom_from_pk(const PhysicalField& pk_phys, LPIndex idx) {
  const PhysicalField chi = spatial_cutoff(pk_phys.grid(), idx.k, idx.j);
  const SpectralField localized = SpectralField::from_physical(multiply(chi, pk_phys));
  return project_range(localized, idx.k - 2, idx.k + 2);
}

void require_admissible(LPIndex idx) {
  if (!idx.admissible()) {
    std::ostringstream msg;
    msg << "atom (k=" << idx.k << ", j=" << idx.j << ") is outside the index set (need j >= 0, k + j >= 0)";
    throw IndexError(msg.str());
  }
}
}  // namespace

SpectralField atom_qjk(const SpectralField& g, LPIndex idx) {
  require_admissible(idx);
  return atom_from_pk(project_pk(g, idx.k).to_physical(), idx);
}

double sobolev_norm(const SpectralField& g, double n_index) {
  if (n_index < 0.0) throw PreconditionError("sobolev_norm: n_index must be >= 0");
  const GridSpec& grid = g.grid();
  std::vector<double> terms(grid.size(), 0.0);
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      const Complex c = g(i, j);
      if (c == Complex{}) continue;
      terms[grid.index(i, j)] = std::pow(1.0 + norm2(grid.xi(i, j)), n_index) * std::norm(c);
    }
  }
  return grid.k_min() * std::sqrt(pairwise_sum(terms));
}

double x_weight(LPIndex idx, double delta) {
  return std::exp2((idx.k + idx.j) * (1.0 + delta) + 4.0 * std::max(idx.k, 0));
}

NormReport x_norm(const SpectralField& g, double delta, int j_max, KRange k_range, double n_index, int jobs) {
  if (!(delta > 0.0 && delta <= 0.1)) throw PreconditionError("x_norm: delta must lie in (0, 0.1]");
  if (k_range.hi < k_range.lo) throw PreconditionError("x_norm: empty k range");
  const GridSpec& grid = g.grid();

  NormReport r;
  r.delta = delta;
  r.n_index = n_index;
  r.k_range = k_range;
  r.j_max = j_max;
  r.l2 = spectral::l2_norm(g);
  r.h_n = sobolev_norm(g, n_index);
  r.l_inf = spectral::linf_norm(g);

  const double total = r.l2 * r.l2;
  if (total > 0.0) {
    const PhysicalField inside = multiply(spatial_cutoff(grid, -j_max, j_max),
                                          project_range(g, k_range.lo, k_range.hi).to_physical());
    r.captured_fraction = mass(SpectralField::from_physical(inside)) / total;
    if (r.captured_fraction < 1.0 - 1e-6) {
      std::ostringstream msg;
      msg << "x_norm: truncation k in [" << k_range.lo << ", " << k_range.hi << "], j <= " << j_max
          << " captures only " << r.captured_fraction << " of the L2 mass";
      throw TruncationError(msg.str(), r.captured_fraction);
    }
  }

  std::vector<LPIndex> atoms;
  for (int k = k_range.lo; k <= k_range.hi; ++k) {
    for (int j = cutoff::min_j(k); j <= j_max; ++j) atoms.push_back({k, j});
  }
  std::vector<PhysicalField> pk(static_cast<std::size_t>(k_range.hi - k_range.lo + 1), PhysicalField(grid));
  parallel_for(pk.size(), jobs, [&](std::size_t i) {
    pk[i] = project_pk(g, k_range.lo + static_cast<int>(i)).to_physical();
  });
  r.per_atom.resize(atoms.size());
  parallel_for(atoms.size(), jobs, [&](std::size_t a) {
    const LPIndex idx = atoms[a];
    const double l2 = spectral::l2_norm(atom_from_pk(pk[static_cast<std::size_t>(idx.k - k_range.lo)], idx));
    const double w = x_weight(idx, delta);
    r.per_atom[a] = {idx, l2, w, w * l2};
  });
  for (const auto& a : r.per_atom) {
    if (a.weighted_value > r.x_norm) {
      r.x_norm = a.weighted_value;
      r.argmax = a.idx;
    }
  }
  return r;
}

NormReport x_norm(const SpectralField& g, double delta, double n_index, int jobs) {
  return x_norm(g, delta, default_j_max(g.grid()), resolved_k_range(g.grid()), n_index, jobs);
}

void write_report(const NormReport& r, const std::filesystem::path& atoms_csv,
                  const std::filesystem::path& summary_csv) {
  csv::Writer atoms(atoms_csv, {"k", "j", "atom_l2", "weight", "weighted_value"});
  for (const auto& a : r.per_atom) atoms.row(a.idx.k, a.idx.j, a.atom_l2, a.weight, a.weighted_value);
  csv::Writer summary(summary_csv, {"l2", "h_n", "l_inf", "x_norm", "delta", "n_index", "k_lo", "k_hi", "j_max",
                                    "captured_fraction", "argmax_k", "argmax_j"});
  summary.row(r.l2, r.h_n, r.l_inf, r.x_norm, r.delta, r.n_index, r.k_range.lo, r.k_range.hi, r.j_max,
              r.captured_fraction, r.argmax.k, r.argmax.j);
}

}  // namespace betaplane::lp
