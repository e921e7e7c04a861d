#include "betaplane/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "betaplane/errors.hpp"
#include "betaplane/fft.hpp"

namespace betaplane::spectral {

namespace {

constexpr Complex kI{0.0, 1.0};

template <class F>
SpectralField map_modes(const SpectralField& g, F&& f) {
  const GridSpec& grid = g.grid();
  SpectralField out(grid);
  const int nyq = grid.n / 2;
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      // The Nyquist row and column are never retained.
      if (i == nyq || j == nyq) continue;
      const std::size_t k = grid.index(i, j);
      out.coeffs()[k] = f(grid.xi(i, j), g.coeffs()[k]);
    }
  }
  return out;
}

// Physical-space samples of a spectral field, kept complex to avoid a copy.
std::vector<Complex> physical_samples(const SpectralField& g) {
  std::vector<Complex> buf(g.coeffs().begin(), g.coeffs().end());
  fft::Plan2D::get(g.grid().n).backward(buf, buf);
  const double scale = 2.0 * std::numbers::pi / (g.grid().l * g.grid().l);
  for (auto& c : buf) c = {scale * c.real(), 0.0};
  return buf;
}

}  // namespace

void require_mean_zero(const SpectralField& g, const char* op) {
  if (!g.mean_zero()) {
    throw PreconditionError(std::string(op) + ": field has a nonzero zero mode (not mean-zero)");
  }
}

SpectralField apply_multiplier(const SpectralField& g, const Symbol& symbol) {
  const GridSpec& grid = g.grid();
  SpectralField out(grid);
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      const std::size_t k = grid.index(i, j);
      const Complex c = g.coeffs()[k];
      const Complex s = symbol(grid.xi(i, j));
      if (std::isfinite(s.real()) && std::isfinite(s.imag())) {
        out.coeffs()[k] = s * c;
      } else if (grid.retained(i, j) && c != Complex{}) {
        std::ostringstream msg;
        msg << "apply_multiplier: symbol not finite at mode (" << grid.wavenumber(i) << ", "
            << grid.wavenumber(j) << ")";
        throw PreconditionError(msg.str());
      }
    }
  }
  return out;
}

SpectralField dealias(const SpectralField& g) {
  const GridSpec& grid = g.grid();
  SpectralField out = g;
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      if (!grid.retained(i, j)) out(i, j) = Complex{};
    }
  }
  return out;
}

VelocityField biot_savart(const SpectralField& omega) {
  require_mean_zero(omega, "biot_savart");
  auto comp = [&](bool first) {
    return map_modes(omega, [first](Vec2 xi, Complex w) -> Complex {
      const double k2 = norm2(xi);
      if (k2 == 0.0) return {};
      return kI * (first ? -xi.y : xi.x) / k2 * w;
    });
  };
  return {comp(true), comp(false)};
}

SpectralField partial(const SpectralField& g, int axis) {
  return map_modes(g, [axis](Vec2 xi, Complex c) { return kI * (axis == 0 ? xi.x : xi.y) * c; });
}

SpectralField curl(const VelocityField& u) {
  SpectralField w = partial(u.u1, 1);
  w -= partial(u.u2, 0);
  return w;
}

SpectralField divergence(const VelocityField& u) {
  SpectralField d = partial(u.u1, 0);
  d += partial(u.u2, 1);
  return d;
}

Complex l1_symbol(Vec2 xi) {
  const double k2 = norm2(xi);
  if (k2 == 0.0) return {};
  return -kI * xi.x / k2;
}

SpectralField l1_semigroup(const SpectralField& g, double t) {
  require_mean_zero(g, "l1_semigroup");
  return map_modes(g, [t](Vec2 xi, Complex c) -> Complex {
    const double k2 = norm2(xi);
    if (k2 == 0.0) return {};
    const double phase = -t * xi.x / k2;
    return Complex{std::cos(phase), std::sin(phase)} * c;
  });
}

SpectralField transport_nonlinearity(const SpectralField& omega) {
  const GridSpec& grid = omega.grid();
  if (grid.retained_per_axis() < 8) {
    throw ConfigurationError("transport_nonlinearity: fewer than 8 retained modes per axis");
  }
  require_mean_zero(omega, "transport_nonlinearity");
  const SpectralField w = dealias(omega);
  const VelocityField u = biot_savart(w);
  const auto u1 = physical_samples(u.u1);
  const auto u2 = physical_samples(u.u2);
  const auto w1 = physical_samples(partial(w, 0));
  const auto w2 = physical_samples(partial(w, 1));
  std::vector<Complex> prod(grid.size());
  for (std::size_t k = 0; k < prod.size(); ++k) {
    prod[k] = {-(u1[k].real() * w1[k].real() + u2[k].real() * w2[k].real()), 0.0};
  }
  fft::Plan2D::get(grid.n).forward(prod, prod);
  const double scale = grid.dx() * grid.dx() / (2.0 * std::numbers::pi);
  SpectralField out(grid);
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      if (grid.retained(i, j)) out(i, j) = scale * prod[grid.index(i, j)];
    }
  }
  out(0, 0) = Complex{};
  return out;
}

double inner_product(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw PreconditionError("inner_product: grid mismatch");
  std::vector<double> terms(a.coeffs().size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    terms[k] = (a.coeffs()[k] * std::conj(b.coeffs()[k])).real();
  }
  const double kmin = a.grid().k_min();
  return kmin * kmin * pairwise_sum(terms);
}

double l2_norm(const SpectralField& g) {
  std::vector<double> terms(g.coeffs().size());
  std::ranges::transform(g.coeffs(), terms.begin(), [](Complex c) { return std::norm(c); });
  return g.grid().k_min() * std::sqrt(pairwise_sum(terms));
}

double l2_norm(const VelocityField& u) { return std::hypot(l2_norm(u.u1), l2_norm(u.u2)); }

double l2_norm(const PhysicalField& g) {
  std::vector<double> sq(g.values().size());
  std::ranges::transform(g.values(), sq.begin(), [](double v) { return v * v; });
  return g.grid().dx() * std::sqrt(pairwise_sum(sq));
}

double l1_norm(const PhysicalField& g) {
  std::vector<double> a(g.values().size());
  std::ranges::transform(g.values(), a.begin(), [](double v) { return std::abs(v); });
  return g.grid().dx() * g.grid().dx() * pairwise_sum(a);
}

double linf_norm(const PhysicalField& g) {
  double m = 0.0;
  for (double v : g.values()) m = std::max(m, std::abs(v));
  return m;
}

double linf_norm(const SpectralField& g) { return linf_norm(g.to_physical()); }

double max_speed(const VelocityField& u) {
  const PhysicalField a = u.u1.to_physical();
  const PhysicalField b = u.u2.to_physical();
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    m = std::max(m, std::hypot(a.values()[k], b.values()[k]));
  }
  return m;
}

double linf_velocity_gradient(const VelocityField& u) {
  double m = 0.0;
  for (const SpectralField* c : {&u.u1, &u.u2}) {
    for (int axis = 0; axis < 2; ++axis) m = std::max(m, linf_norm(partial(*c, axis)));
  }
  return m;
}

double tail_mass(const PhysicalField& g) {
  const GridSpec& grid = g.grid();
  const Vec2 c = grid.center();
  const double half = 0.25 * grid.l;
  std::vector<double> all(grid.size());
  std::vector<double> outside(grid.size(), 0.0);
  for (int p = 0; p < grid.n; ++p) {
    for (int q = 0; q < grid.n; ++q) {
      const Vec2 x = grid.position(p, q);
      const std::size_t k = grid.index(p, q);
      const double v2 = g.values()[k] * g.values()[k];
      all[k] = v2;
      if (std::abs(x.x - c.x) >= half || std::abs(x.y - c.y) >= half) outside[k] = v2;
    }
  }
  const double total = pairwise_sum(all);
  if (total == 0.0) return 0.0;
  return std::clamp(pairwise_sum(outside) / total, 0.0, 1.0);
}

double evaluate_at(const SpectralField& g, Vec2 x) {
  const GridSpec& grid = g.grid();
  double sum = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      const Complex c = g(i, j);
      if (c == Complex{}) continue;
      const double phase = dot(x, grid.xi(i, j));
      sum += c.real() * std::cos(phase) - c.imag() * std::sin(phase);
    }
  }
  const double kmin = grid.k_min();
  return kmin * kmin / (2.0 * std::numbers::pi) * sum;
}

}  // namespace betaplane::spectral
