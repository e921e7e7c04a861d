#pragma once

#include <cstddef>
#include <numbers>

#include "betaplane/vec2.hpp"

namespace betaplane {

/// Periodic square torus [0, l)^2 sampled on n x n points.
///
/// Modes are stored in FFT order: index i along an axis carries the integer
/// wavenumber i for i < n/2 and i - n otherwise. The Nyquist index n/2 is
/// never retained, so every retained mode has a retained conjugate partner.
struct GridSpec {
  int n = 256;
  double l = 64.0;
  double dealias_fraction = 2.0 / 3.0;

  /// Throws ConfigurationError unless n >= 16 is a power of two, l > 0 and
  /// 0 < dealias_fraction <= 1.
  void validate() const;

  double k_min() const { return 2.0 * std::numbers::pi / l; }
  double dx() const { return l / n; }
  double nyquist() const { return std::numbers::pi * n / l; }
  std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }

  /// Signed integer wavenumber carried by FFT index i.
  int wavenumber(int i) const { return i < n / 2 ? i : i - n; }
  /// Largest retained |integer wavenumber| per axis under the dealias rule.
  int max_retained() const;
  int retained_per_axis() const { return 2 * max_retained() + 1; }
  bool retained(int i, int j) const;

  Vec2 xi(int i, int j) const { return {k_min() * wavenumber(i), k_min() * wavenumber(j)}; }
  Vec2 position(int p, int q) const { return {dx() * p, dx() * q}; }
  Vec2 center() const { return {0.5 * l, 0.5 * l}; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
  }
  /// FFT index of the mode -xi for the mode stored at (i, j).
  std::size_t conjugate_index(int i, int j) const { return index((n - i) % n, (n - j) % n); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

}  // namespace betaplane
