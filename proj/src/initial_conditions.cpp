#include "betaplane/initial_conditions.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "betaplane/errors.hpp"
#include "betaplane/littlewood_paley.hpp"
#include "betaplane/spectral_ops.hpp"

namespace betaplane {

void SimConfig::validate() const {
  grid.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigurationError("config: dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigurationError("config: t_end must be >= 0");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw ConfigurationError("config: amplitude must be >= 0");
  if (diag_stride < 1) throw ConfigurationError("config: diag_stride must be >= 1");
  if (n_index < 0.0) throw ConfigurationError("config: n_index must be >= 0");
  if (!(delta > 0.0 && delta <= 0.1)) throw ConfigurationError("config: delta must lie in (0, 0.1]");
  if (ic_kind != "vortex-pair" && ic_kind != "random" && ic_kind != "wave-packet" &&
      ic_kind != "gaussian-derivative") {
    throw ConfigurationError("config: unknown ic_kind '" + ic_kind + "'");
  }
  if (!(ic_scale > 0.0)) throw ConfigurationError("config: ic_scale must be positive");
  if (ic_order < 0 || ic_aniso < 0) throw ConfigurationError("config: ic_order and ic_aniso must be >= 0");
}

SimConfig SimConfig::from_kv(KvConfig& kv, const SimConfig& base) {
  SimConfig c = base;
  c.grid.n = kv.get("n", c.grid.n);
  c.grid.l = kv.get("l", c.grid.l);
  c.grid.dealias_fraction = kv.get("dealias_fraction", c.grid.dealias_fraction);
  c.dt = kv.get("dt", c.dt);
  c.t_end = kv.get("t_end", c.t_end);
  c.amplitude = kv.get("amplitude", c.amplitude);
  c.ic_kind = kv.get("ic_kind", c.ic_kind);
  c.n_index = kv.get("n_index", c.n_index);
  c.delta = kv.get("delta", c.delta);
  c.diag_stride = kv.get("diag_stride", c.diag_stride);
  c.linear_only = kv.get("linear_only", c.linear_only);
  c.seed = kv.get("seed", c.seed);
  c.ic_scale = kv.get("ic_scale", c.ic_scale);
  c.ic_order = kv.get("ic_order", c.ic_order);
  c.ic_aniso = kv.get("ic_aniso", c.ic_aniso);
  c.ic_k = kv.get("ic_k", c.ic_k);
  c.ic_j = kv.get("ic_j", c.ic_j);
  return c;
}

std::string SimConfig::to_kv() const {
  std::ostringstream os;
  os.precision(17);
  os << "n = " << grid.n << "\nl = " << grid.l << "\ndealias_fraction = " << grid.dealias_fraction
     << "\ndt = " << dt << "\nt_end = " << t_end << "\namplitude = " << amplitude << "\nic_kind = " << ic_kind
     << "\nn_index = " << n_index << "\ndelta = " << delta << "\ndiag_stride = " << diag_stride
     << "\nlinear_only = " << (linear_only ? "true" : "false") << "\nseed = " << seed << "\nic_scale = " << ic_scale
     << "\nic_order = " << ic_order << "\nic_aniso = " << ic_aniso << "\nic_k = " << ic_k << "\nic_j = " << ic_j
     << "\n";
  return os.str();
}

SpectralField translate(const SpectralField& g, Vec2 c) {
  const GridSpec& grid = g.grid();
  SpectralField out(grid);
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      const double a = -dot(c, grid.xi(i, j));
      out(i, j) = Complex{std::cos(a), std::sin(a)} * g(i, j);
    }
  }
  return out;
}

namespace {

template <class F>
PhysicalField sample(const GridSpec& grid, F&& f) {
  PhysicalField out(grid);
  const Vec2 c = grid.center();
  for (int p = 0; p < grid.n; ++p) {
    for (int q = 0; q < grid.n; ++q) out(p, q) = f(grid.position(p, q) - c);
  }
  return out;
}

double gaussian(Vec2 x, double s) { return std::exp(-0.5 * norm2(x) / (s * s)); }

SpectralField gaussian_derivative(const SimConfig& c) {
  const GridSpec& grid = c.grid;
  SpectralField g(grid);
  const double s2 = c.ic_scale * c.ic_scale;
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      const Vec2 xi = grid.xi(i, j);
      const double r2 = norm2(xi);
      Complex v = std::pow(r2, c.ic_order) * std::exp(-0.5 * s2 * r2);
      for (int a = 0; a < c.ic_aniso; ++a) v *= Complex{0.0, xi.x};
      g(i, j) = v;
    }
  }
  return translate(g, grid.center());
}

}  // namespace

SpectralField make_initial_condition(const SimConfig& c) {
  c.validate();
  const GridSpec& grid = c.grid;
  SpectralField w(grid);
  if (c.ic_kind == "vortex-pair") {
    const Vec2 d{c.ic_scale, 0.0};
    w = SpectralField::from_physical(
        sample(grid, [&](Vec2 x) { return gaussian(x - d, c.ic_scale) - gaussian(x + d, c.ic_scale); }));
  } else if (c.ic_kind == "wave-packet") {
    const double k = std::ldexp(1.0, c.ic_k);
    const double s = std::ldexp(1.0, c.ic_j);
    w = SpectralField::from_physical(sample(grid, [&](Vec2 x) { return std::cos(k * x.x) * gaussian(x, s); }));
  } else if (c.ic_kind == "random") {
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> normal;
    PhysicalField noise(grid);
    for (double& v : noise.values()) v = normal(rng);
    const PhysicalField band = lp::project_pk(SpectralField::from_physical(noise), c.ic_k).to_physical();
    const double s = std::ldexp(1.0, c.ic_j);
    const PhysicalField env = sample(grid, [&](Vec2 x) { return gaussian(x, s); });
    PhysicalField prod(grid);
    for (std::size_t k = 0; k < prod.values().size(); ++k) prod.values()[k] = band.values()[k] * env.values()[k];
    w = SpectralField::from_physical(prod);
  } else {
    w = gaussian_derivative(c);
  }
  // The Nyquist row and column are their own conjugate partners; a
  // non-even multiplier would make them complex, so they are dropped.
  for (int m = 0; m < grid.n; ++m) {
    w(grid.n / 2, m) = Complex{};
    w(m, grid.n / 2) = Complex{};
  }
  w(0, 0) = Complex{};
  const double peak = spectral::linf_norm(w);
  if (peak == 0.0 || c.amplitude == 0.0) return SpectralField(grid);
  w *= c.amplitude / peak;
  return w;
}

}  // namespace betaplane
