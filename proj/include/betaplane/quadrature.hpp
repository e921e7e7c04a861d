#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <sstream>
#include <type_traits>

#include "betaplane/errors.hpp"

namespace betaplane::quad {

/// 20-point Gauss-Legendre rule on [-1, 1].
std::span<const double> gl_nodes();
std::span<const double> gl_weights();
inline constexpr int kNodesPerPanel = 20;

struct Box {
  double x0, x1, y0, y1;
  bool empty() const { return !(x1 > x0 && y1 > y0); }
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// Intersection of two axis-aligned boxes (possibly empty).
inline Box intersect(const Box& a, const Box& b) {
  return {std::fmax(a.x0, b.x0), std::fmin(a.x1, b.x1), std::fmax(a.y0, b.y0), std::fmin(a.y1, b.y1)};
}

template <class F>
auto integrate_1d(F&& f, double a, double b, int panels) {
  using R = std::decay_t<decltype(f(a))>;
  R sum{};
  const auto x = gl_nodes();
  const auto w = gl_weights();
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    R part{};
    for (int i = 0; i < kNodesPerPanel; ++i) part += w[i] * f(c + 0.5 * h * x[i]);
    sum += 0.5 * h * part;
  }
  return sum;
}

/// Tensor-product Gauss-Legendre over px x py equal panels of the box.
template <class F>
auto integrate_2d(F&& f, const Box& box, int px, int py) {
  using R = std::decay_t<decltype(f(box.x0, box.y0))>;
  R sum{};
  if (box.empty()) return sum;
  const auto x = gl_nodes();
  const auto w = gl_weights();
  const double hx = box.width() / px;
  const double hy = box.height() / py;
  for (int a = 0; a < px; ++a) {
    const double cx = box.x0 + (a + 0.5) * hx;
    for (int b = 0; b < py; ++b) {
      const double cy = box.y0 + (b + 0.5) * hy;
      R part{};
      for (int i = 0; i < kNodesPerPanel; ++i) {
        const double xi = cx + 0.5 * hx * x[i];
        R row{};
        for (int j = 0; j < kNodesPerPanel; ++j) row += w[j] * f(xi, cy + 0.5 * hy * x[j]);
        part += w[i] * row;
      }
      sum += 0.25 * hx * hy * part;
    }
  }
  return sum;
}

template <class R>
struct Converged {
  R value{};
  double rel_change = 0.0;
  int px = 0;
  int py = 0;
};

/// Doubles the panel counts until successive results differ by at most
/// rel_tol * |value| + abs_tol. Throws ConvergenceError (with the achieved
/// relative change) after max_doublings refinements.
template <class F>
auto integrate_2d_converged(F&& f, const Box& box, int px, int py, double rel_tol, double abs_tol,
                            int max_doublings = 6) {
  using R = std::decay_t<decltype(f(box.x0, box.y0))>;
  Converged<R> out;
  R prev = integrate_2d(f, box, px, py);
  for (int d = 0; d < max_doublings; ++d) {
    px *= 2;
    py *= 2;
    const R cur = integrate_2d(f, box, px, py);
    const double diff = std::abs(cur - prev);
    const double scale = std::abs(cur);
    out = {cur, scale > 0.0 ? diff / scale : (diff > 0.0 ? INFINITY : 0.0), px, py};
    if (diff <= rel_tol * scale + abs_tol) return out;
    prev = cur;
  }
  std::ostringstream msg;
  msg << "quadrature: no convergence after " << max_doublings << " panel doublings (relative change "
      << out.rel_change << ")";
  throw ConvergenceError(msg.str(), out.rel_change);
}

/// Panels per axis so that a phase with gradient bound `rate` over `length`
/// gets at least 8 nodes per oscillation, and never fewer than `min_panels`.
inline int panels_for(double rate, double length, int min_panels) {
  const double oscillations = rate * length / (2.0 * 3.141592653589793);
  const int need = static_cast<int>(std::ceil(oscillations * 8.0 / kNodesPerPanel));
  return need > min_panels ? need : min_panels;
}

}  // namespace betaplane::quad
