#pragma once

#include <complex>
#include <span>
#include <vector>

#include "betaplane/grid.hpp"

namespace betaplane {

using Complex = std::complex<double>;

/// Real scalar field sampled on the grid points x = (p dx, q dx).
class PhysicalField {
 public:
  explicit PhysicalField(GridSpec grid);
  PhysicalField(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator()(int p, int q) const { return values_[grid_.index(p, q)]; }
  double& operator()(int p, int q) { return values_[grid_.index(p, q)]; }

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Fourier coefficients of a real field on the torus.
///
/// Convention: g^(xi) = (2 pi)^-1 * integral over the torus of exp(-i x.xi) g(x) dx,
/// approximated by the grid sum. With this normalization
///   ||g||_{L^2}^2 = k_min^2 * sum_xi |g^(xi)|^2,
///   g(x) = (2 pi)^-1 * k_min^2 * sum_xi exp(i x.xi) g^(xi).
class SpectralField {
 public:
  explicit SpectralField(GridSpec grid);
  SpectralField(GridSpec grid, std::vector<Complex> coeffs);

  static SpectralField from_physical(const PhysicalField& f);
  PhysicalField to_physical() const;

  const GridSpec& grid() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  Complex operator()(int i, int j) const { return coeffs_[grid_.index(i, j)]; }
  Complex& operator()(int i, int j) { return coeffs_[grid_.index(i, j)]; }
  Complex zero_mode() const { return coeffs_[0]; }

  /// Worst |c(-xi) - conj(c(xi))| relative to the largest coefficient.
  double conjugate_symmetry_defect() const;
  /// True when |zero_mode| is below tol times the largest coefficient.
  bool mean_zero(double tol = 1e-12) const;
  double max_abs_coeff() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  GridSpec grid_;
  std::vector<Complex> coeffs_;
};

struct VelocityField {
  SpectralField u1;
  SpectralField u2;
};

/// Pairwise (cascade) summation of a sequence of doubles.
double pairwise_sum(std::span<const double> values);

}  // namespace betaplane
