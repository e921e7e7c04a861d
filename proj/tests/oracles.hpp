#pragma once

// Independent reference computations. Nothing here calls the FFT path or the
// spectral operators of the library.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "betaplane/spectral_field.hpp"

namespace oracle {

using betaplane::Complex;
using betaplane::GridSpec;
using betaplane::PhysicalField;
using betaplane::SpectralField;
using betaplane::Vec2;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// g^(xi) = dx^2 / (2 pi) * sum_x exp(-i x.xi) g(x), summed term by term.
inline std::vector<Complex> naive_dft(const PhysicalField& f) {
  const GridSpec& g = f.grid();
  std::vector<Complex> out(g.size());
  const double scale = g.dx() * g.dx() / kTwoPi;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const Vec2 xi = g.xi(i, j);
      Complex s{};
      for (int p = 0; p < g.n; ++p) {
        for (int q = 0; q < g.n; ++q) {
          const Vec2 x = g.position(p, q);
          const double ph = -(x.x * xi.x + x.y * xi.y);
          s += f(p, q) * Complex{std::cos(ph), std::sin(ph)};
        }
      }
      out[g.index(i, j)] = scale * s;
    }
  }
  return out;
}

/// Fourier series of the coefficients weighted by `symbol`, evaluated at x.
template <class Sym>
double series_at(const SpectralField& c, Vec2 x, Sym symbol) {
  const GridSpec& g = c.grid();
  Complex s{};
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const Complex a = c(i, j);
      if (a == Complex{}) continue;
      const Vec2 xi = g.xi(i, j);
      const double ph = x.x * xi.x + x.y * xi.y;
      s += symbol(xi) * a * Complex{std::cos(ph), std::sin(ph)};
    }
  }
  return (g.k_min() * g.k_min() / kTwoPi * s).real();
}

/// -u.grad(omega) sampled on the grid by direct Fourier sums (no FFT),
/// transformed by naive_dft and restricted to the retained modes.
inline std::vector<Complex> transport_reference(const SpectralField& w) {
  const GridSpec& g = w.grid();
  const Complex I{0.0, 1.0};
  PhysicalField prod(g);
  for (int p = 0; p < g.n; ++p) {
    for (int q = 0; q < g.n; ++q) {
      const Vec2 x = g.position(p, q);
      auto inv = [](Vec2 xi) { return xi.x * xi.x + xi.y * xi.y; };
      const double u1 = series_at(w, x, [&](Vec2 xi) { return inv(xi) == 0 ? Complex{} : -I * xi.y / inv(xi); });
      const double u2 = series_at(w, x, [&](Vec2 xi) { return inv(xi) == 0 ? Complex{} : I * xi.x / inv(xi); });
      const double w1 = series_at(w, x, [&](Vec2 xi) { return I * xi.x; });
      const double w2 = series_at(w, x, [&](Vec2 xi) { return I * xi.y; });
      prod(p, q) = -(u1 * w1 + u2 * w2);
    }
  }
  auto out = naive_dft(prod);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      if (!g.retained(i, j) || (i == 0 && j == 0)) out[g.index(i, j)] = Complex{};
    }
  }
  return out;
}

/// Real, mean-zero field with a few random retained modes of |integer
/// wavenumber| <= kmax per axis. Conjugate pairs are filled together.
inline SpectralField random_modes(const GridSpec& g, int kmax, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  SpectralField f(g);
  for (int a = -kmax; a <= kmax; ++a) {
    for (int b = -kmax; b <= kmax; ++b) {
      if (a == 0 && b == 0) continue;
      if (a < 0 || (a == 0 && b < 0)) continue;
      const int i = (a + g.n) % g.n, j = (b + g.n) % g.n;
      const Complex c{nd(rng), nd(rng)};
      f(i, j) = c;
      f((g.n - i) % g.n, (g.n - j) % g.n) = std::conj(c);
    }
  }
  return f;
}

/// Gaussian exp(-|x - c|^2 / (2 s^2)) sampled on the grid about the center.
inline PhysicalField gaussian(const GridSpec& g, double s, Vec2 offset = {0.0, 0.0}) {
  PhysicalField f(g);
  const Vec2 c = g.center() + offset;
  for (int p = 0; p < g.n; ++p) {
    for (int q = 0; q < g.n; ++q) {
      const Vec2 x = g.position(p, q) - c;
      f(p, q) = std::exp(-(x.x * x.x + x.y * x.y) / (2.0 * s * s));
    }
  }
  return f;
}

inline double rel_diff(const std::vector<Complex>& a, std::span<const Complex> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += std::norm(a[k] - b[k]);
    den += std::norm(a[k]);
  }
  return std::sqrt(num / den);
}

}  // namespace oracle
