#include "betaplane/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "betaplane/csv.hpp"
#include "betaplane/cutoff.hpp"
#include "betaplane/errors.hpp"
#include "betaplane/fit.hpp"
#include "betaplane/littlewood_paley.hpp"
#include "betaplane/parallel.hpp"
#include "betaplane/quadrature.hpp"
#include "betaplane/spectral_ops.hpp"

namespace betaplane::osc {

using Complex = std::complex<double>;
using resonance::dispersion;
using resonance::dispersion_gradient;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Widths of the rising and falling transitions of phi(2^-a x) - phi(2^(1-a) x).
constexpr double kInnerTransition = 0.5 * (cutoff::kSupport - cutoff::kPlateau);
constexpr double kOuterTransition = cutoff::kSupport - cutoff::kPlateau;

struct Modes {
  std::vector<Vec2> xi;
  std::vector<Complex> c;
  double scale = 0.0;
};

Modes nonzero_modes(const SpectralField& f) {
  Modes m;
  const GridSpec& grid = f.grid();
  const double cut = 1e-15 * f.max_abs_coeff();
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      const Complex c = f(i, j);
      if (std::abs(c) > cut) {
        m.xi.push_back(grid.xi(i, j));
        m.c.push_back(c);
      }
    }
  }
  m.scale = grid.k_min() * grid.k_min() / kTwoPi;
  return m;
}

double evaluate(const Modes& m, Vec2 x) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.xi.size(); ++i) {
    const double a = dot(x, m.xi[i]);
    s += m.c[i].real() * std::cos(a) - m.c[i].imag() * std::sin(a);
  }
  return m.scale * s;
}

quad::Box ball_box(Vec2 c, double r) { return {c.x - r, c.x + r, c.y - r, c.y + r}; }

bool in_annulus(double r2, int k) {
  const double lo = 0.5 * cutoff::kPlateau * std::ldexp(1.0, k);
  const double hi = cutoff::kSupport * std::ldexp(1.0, k);
  return r2 > lo * lo && r2 < hi * hi;
}

}  // namespace

// ---------------------------------------------------------------------------

double refined_sup(const SpectralField& f) {
  const PhysicalField phys = f.to_physical();
  const GridSpec& grid = f.grid();
  std::size_t arg = 0;
  double best = 0.0;
  for (std::size_t k = 0; k < phys.values().size(); ++k) {
    if (std::abs(phys.values()[k]) > best) {
      best = std::abs(phys.values()[k]);
      arg = k;
    }
  }
  if (best == 0.0) return 0.0;
  const Modes modes = nonzero_modes(f);
  Vec2 x = grid.position(static_cast<int>(arg / grid.n), static_cast<int>(arg % grid.n));
  double h = 0.5 * grid.dx();
  double cur = std::abs(evaluate(modes, x));
  for (int iter = 0; iter < 80 && h > 1e-4 * grid.dx(); ++iter) {
    Vec2 bx = x;
    double bv = cur;
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        if (a == 0 && b == 0) continue;
        const Vec2 y = x + h * Vec2{static_cast<double>(a), static_cast<double>(b)};
        const double v = std::abs(evaluate(modes, y));
        if (v > bv) {
          bv = v;
          bx = y;
        }
      }
    }
    if (bv > cur) {
      cur = bv;
      x = bx;
    } else {
      h *= 0.5;
    }
  }
  return std::max(cur, best);
}

DecayProbe semigroup_decay_probe(const SpectralField& g, int k, std::span<const double> times) {
  DecayProbe probe;
  probe.k = k;
  const SpectralField pk = lp::project_pk(g, k);
  probe.l1_pk = spectral::l1_norm(pk.to_physical());
  probe.sup0 = refined_sup(pk);
  std::vector<double> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  const double norm = std::ldexp(1.0, 3 * k) * probe.l1_pk;
  for (double t : sorted) {
    const SpectralField w = spectral::l1_semigroup(pk, t);
    const double tail = spectral::tail_mass(w.to_physical());
    if (tail > 1e-4) {
      probe.truncated = true;
      std::ostringstream msg;
      msg << "tail mass " << tail << " at t = " << t << " exceeds 1e-4; window truncated";
      probe.warning = msg.str();
      break;
    }
    const double sup = refined_sup(w);
    probe.times.push_back(t);
    probe.sup.push_back(sup);
    probe.tail.push_back(tail);
    probe.ratio.push_back(norm > 0.0 ? sup * t / norm : 0.0);
  }
  if (probe.times.size() >= 2) {
    const LineFit f = fit_loglog(probe.times, probe.sup);
    probe.slope = f.slope;
    probe.r2 = f.r2;
  }
  return probe;
}

void write_decay_probe(const std::filesystem::path& path, const DecayProbe& probe) {
  csv::Writer w(path, {"k", "t", "sup_norm", "ratio", "tail_mass", "fitted_slope", "r2"});
  for (std::size_t i = 0; i < probe.times.size(); ++i) {
    w.row(probe.k, probe.times[i], probe.sup[i], probe.ratio[i], probe.tail[i], probe.slope, probe.r2);
  }
}

double semigroup_quadrature(const Profile& ghat, double r_lo, double r_hi, double t, Vec2 x, double rel_tol) {
  if (!(r_lo > 0.0 && r_hi > r_lo)) throw PreconditionError("semigroup_quadrature: need 0 < r_lo < r_hi");
  auto f = [&](double r, double th) {
    const Vec2 xi{r * std::cos(th), r * std::sin(th)};
    const double a = dot(x, xi) - t * dispersion(xi);
    return ghat(xi) * Complex{std::cos(a), std::sin(a)} * r;
  };
  const double rate = norm(x) + std::abs(t) / (r_lo * r_lo);
  const int pr = quad::panels_for(rate, r_hi - r_lo, 4);
  const int pt = quad::panels_for(r_hi * rate, kTwoPi, 8);
  const auto res = quad::integrate_2d_converged(f, quad::Box{r_lo, r_hi, 0.0, kTwoPi}, pr, pt, rel_tol, 1e-300, 5);
  return res.value.real() / kTwoPi;
}

double hessian_check(Vec2 xi) {
  const double h = 1e-3 * norm(xi);
  auto L = [](double a, double b) { return dispersion({a, b}); };
  auto d2 = [&](auto&& f) {
    return (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h);
  };
  auto d1 = [&](auto&& f) { return (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h); };
  const double fxx = d2([&](double e) { return L(xi.x + e, xi.y); });
  const double fyy = d2([&](double e) { return L(xi.x, xi.y + e); });
  const double fxy = d1([&](double e) { return d1([&](double f) { return L(xi.x + e, xi.y + f); }); });
  return std::abs(fxx * fyy - fxy * fxy);
}

// ---------------------------------------------------------------------------

TimeWindow::TimeWindow(double t) : t_(t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw PreconditionError("TimeWindow: t must be positive");
  levels_ = static_cast<int>(std::ceil(std::log2(std::max(t, 2.0))));
}

double TimeWindow::sigma(double s) const { return 1.0 - cutoff::smooth_step(s - (t_ - 2.0)); }

double TimeWindow::tau(int m, double s) const {
  if (m < 0 || m > levels_ + 1) throw IndexError("TimeWindow: piece index out of range");
  if (m == levels_ + 1) return 1.0 - sigma(s);
  auto chi = [](double u) { return cutoff::phi(1.25 * u); };
  const double rho = m == 0 ? chi(s) : chi(std::ldexp(s, -m)) - chi(std::ldexp(s, 1 - m));
  return rho * sigma(s);
}

double TimeWindow::sum(double s) const {
  double total = 0.0;
  for (int m = 0; m < pieces(); ++m) total += tau(m, s);
  return total;
}

std::pair<double, double> TimeWindow::support(int m) const {
  const double edge = cutoff::kSupport / 1.25;
  if (m == levels_ + 1) return {std::max(0.0, t_ - 2.0), t_};
  if (m == 0) return {0.0, std::min(edge, std::max(0.0, t_ - 1.0))};
  return {std::ldexp(1.0, m - 1), std::min(edge * std::ldexp(1.0, m), std::max(0.0, t_ - 1.0))};
}

// ---------------------------------------------------------------------------

double symbol_value(SymbolKind kind, const resonance::FreqPair& p) {
  switch (kind) {
    case SymbolKind::original:
      return resonance::symbol_orig(p);
    case SymbolKind::symmetrized:
      return resonance::symbol_sym(p);
    case SymbolKind::unit:
      return 1.0;
  }
  return 0.0;
}

namespace {

// Integrand of the localized bilinear operator at fixed xi.
struct BilinearIntegrand {
  const Profile& f;
  const Profile& g;
  double s;
  const LocalizationIndex& loc;
  SymbolKind kind;
  Vec2 xi;

  Complex operator()(double e1, double e2) const {
    const Vec2 eta{e1, e2};
    const Vec2 d = xi - eta;
    if (!in_annulus(norm2(eta), loc.k2) || !in_annulus(norm2(d), loc.k1)) return {};
    double w = cutoff::phi_k(norm(eta), loc.k2) * cutoff::phi_k(norm(d), loc.k1);
    if (loc.ell) {
      const double r = norm(xi - 2.0 * eta);
      w *= cutoff::phi_k(r, *loc.ell);
    }
    if (loc.r) w *= cutoff::phi_k(norm(eta - 2.0 * xi), *loc.r);
    if (w == 0.0) return {};
    const double phi = dispersion(xi) - dispersion(d) - dispersion(eta);
    if (loc.p) {
      w *= cutoff::phi_k(std::abs(phi), *loc.p);
      if (w == 0.0) return {};
    }
    w *= symbol_value(kind, {xi, eta});
    const double a = s * phi;
    return w * Complex{std::cos(a), std::sin(a)} * f(d) * g(eta);
  }
};

// Largest |grad_eta Phi| over the support of the geometric cutoffs, sampled.
double max_grad_eta(const quad::Box& box, const std::function<bool(Vec2)>& inside,
                    const std::function<Vec2(Vec2)>& grad) {
  double m = 0.0;
  constexpr int n = 48;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Vec2 eta{box.x0 + (a + 0.5) * box.width() / n, box.y0 + (b + 0.5) * box.height() / n};
      if (inside(eta)) m = std::max(m, norm(grad(eta)));
    }
  }
  return m;
}

int panels_for_feature(double length, double feature, int min_panels) {
  const int need = static_cast<int>(std::ceil(length / feature));
  return std::max(need, min_panels);
}

}  // namespace

Complex bilinear_at(const Profile& f, const Profile& g, double s, const LocalizationIndex& loc, SymbolKind kind,
                    Vec2 xi, const BilinearOptions& opts) {
  if (loc.vanishes()) return {};
  if (cutoff::phi_k(norm(xi), loc.k) == 0.0) return {};
  quad::Box box = ball_box({0.0, 0.0}, cutoff::kSupport * std::ldexp(1.0, loc.k2));
  box = quad::intersect(box, ball_box(xi, cutoff::kSupport * std::ldexp(1.0, loc.k1)));
  if (loc.ell) box = quad::intersect(box, ball_box(0.5 * xi, 0.5 * cutoff::kSupport * std::ldexp(1.0, *loc.ell)));
  if (loc.r) box = quad::intersect(box, ball_box(2.0 * xi, cutoff::kSupport * std::ldexp(1.0, *loc.r)));
  if (box.empty()) return {};

  const BilinearIntegrand integrand{f, g, s, loc, kind, xi};
  auto inside = [&](Vec2 eta) { return in_annulus(norm2(eta), loc.k2) && in_annulus(norm2(xi - eta), loc.k1); };
  auto grad = [&](Vec2 eta) { return dispersion_gradient(xi - eta) - dispersion_gradient(eta); };
  const double gmax = max_grad_eta(box, inside, grad);

  // Smallest feature of the integrand in eta: one oscillation spread over
  // 8 nodes, or one cutoff transition per panel.
  double feature = std::numeric_limits<double>::infinity();
  if (s * gmax > 0.0) feature = kTwoPi / (s * gmax) * quad::kNodesPerPanel / 8.0;
  feature = std::min(feature, kInnerTransition * std::ldexp(1.0, std::min(loc.k1, loc.k2)));
  if (loc.ell) feature = std::min(feature, 0.5 * kInnerTransition * std::ldexp(1.0, *loc.ell));
  if (loc.r) feature = std::min(feature, kInnerTransition * std::ldexp(1.0, *loc.r));
  if (loc.p && gmax > 0.0) feature = std::min(feature, kInnerTransition * std::ldexp(1.0, *loc.p) / gmax);

  const int px = panels_for_feature(box.width(), feature, opts.min_panels);
  const int py = panels_for_feature(box.height(), feature, opts.min_panels);
  const double mass = quad::integrate_2d([&](double a, double b) { return std::abs(integrand(a, b)); }, box, px, py);
  if (mass == 0.0) return {};
  const auto res = quad::integrate_2d_converged(integrand, box, px, py, opts.rel_tol,
                                                std::max(opts.abs_tol, 1e-3 * opts.rel_tol * mass), 5);
  return cutoff::phi_k(norm(xi), loc.k) * res.value;
}

BilinearResult bilinear_localized(const Profile& f, const Profile& g, double s, const LocalizationIndex& loc,
                                  SymbolKind kind, const GridSpec& grid, const BilinearOptions& opts, int jobs) {
  BilinearResult result{SpectralField(grid), loc.vanishes(), 0.0};
  if (result.empty) return result;
  std::vector<std::pair<int, int>> modes;
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      if (cutoff::phi_k(norm(grid.xi(i, j)), loc.k) > 0.0) modes.emplace_back(i, j);
    }
  }
  parallel_for(modes.size(), jobs, [&](std::size_t m) {
    const auto [i, j] = modes[m];
    result.out(i, j) = bilinear_at(f, g, s, loc, kind, grid.xi(i, j), opts);
  });
  return result;
}

// ---------------------------------------------------------------------------

SublevelResult sublevel_measure(const std::function<double(Vec2)>& F, const std::function<Vec2(Vec2)>& grad_F,
                                Vec2 center, double R, double lambda, double mu, std::size_t samples,
                                std::uint64_t seed) {
  if (!(R > 0.0) || samples == 0) throw PreconditionError("sublevel_measure: need R > 0 and samples > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double level = std::exp2(lambda);
  const double slope = std::exp2(mu);
  std::size_t hits = 0;
  std::size_t drawn = 0;
  while (drawn < samples) {
    const Vec2 d{u(rng), u(rng)};
    if (norm2(d) > 1.0) continue;
    ++drawn;
    const Vec2 x = center + R * d;
    if (std::abs(F(x)) <= level && norm(grad_F(x)) >= slope) ++hits;
  }
  SublevelResult r;
  r.samples = samples;
  r.measure = std::numbers::pi * R * R * static_cast<double>(hits) / static_cast<double>(samples);
  r.bound_shape = std::exp2(lambda - mu) * R;
  r.ratio = r.measure / r.bound_shape;
  return r;
}

namespace {

struct IbpSetup {
  std::function<double(Vec2)> amp;
  std::function<double(Vec2)> F;
  std::function<Vec2(Vec2)> grad;
  quad::Box box;
};

double edge_bump(double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

IbpSetup ibp_setup(const std::string& amplitude, const std::string& phase) {
  IbpSetup st;
  if (amplitude == "annulus") {
    st.amp = [](Vec2 x) { return edge_bump(norm(x) - 2.0); };
    st.box = {-3.0, 3.0, -3.0, 3.0};
  } else if (amplitude == "disc") {
    st.amp = [](Vec2 x) { return edge_bump(norm(x)); };
    st.box = {-1.0, 1.0, -1.0, 1.0};
  } else {
    throw PreconditionError("ibp: unknown amplitude profile '" + amplitude + "'");
  }
  if (phase == "linear") {
    st.F = [](Vec2 x) { return x.x; };
    st.grad = [](Vec2) { return Vec2{1.0, 0.0}; };
  } else if (phase == "quadratic") {
    st.F = [](Vec2 x) { return 0.5 * norm2(x); };
    st.grad = [](Vec2 x) { return x; };
  } else {
    throw PreconditionError("ibp: unknown phase '" + phase + "'");
  }
  return st;
}

constexpr int kIbpMinPanels = 16;

}  // namespace

Complex ibp_integral(const std::string& amplitude, const std::string& phase, double K, double floor_rel) {
  const IbpSetup st = ibp_setup(amplitude, phase);
  const double l1 = quad::integrate_2d([&](double a, double b) { return st.amp({a, b}); }, st.box, kIbpMinPanels,
                                       kIbpMinPanels);
  auto f = [&](double a, double b) {
    const Vec2 x{a, b};
    const double g = st.amp(x);
    if (g == 0.0) return Complex{};
    const double ph = K * st.F(x);
    return g * Complex{std::cos(ph), std::sin(ph)};
  };
  double rx = 0.0, ry = 0.0;
  for (double a : {st.box.x0, st.box.x1}) {
    for (double b : {st.box.y0, st.box.y1}) {
      const Vec2 gr = st.grad({a, b});
      rx = std::max(rx, std::abs(gr.x));
      ry = std::max(ry, std::abs(gr.y));
    }
  }
  const int px = quad::panels_for(std::abs(K) * rx, st.box.width(), kIbpMinPanels);
  const int py = quad::panels_for(std::abs(K) * ry, st.box.height(), kIbpMinPanels);
  return quad::integrate_2d_converged(f, st.box, px, py, 1e-9, 0.5 * floor_rel * l1, 4).value;
}

IbpProbe ibp_decay_probe(const std::string& amplitude, const std::string& phase, std::span<const double> K_values,
                         int M, double floor_rel) {
  const IbpSetup st = ibp_setup(amplitude, phase);
  if (K_values.size() < 2) throw PreconditionError("ibp_decay_probe: need at least two K values");
  const auto [lo, hi] = std::minmax_element(K_values.begin(), K_values.end());
  if (!(*lo > 0.0) || *hi / *lo < 100.0 * (1.0 - 1e-12)) {
    throw PreconditionError("ibp_decay_probe: K values must be positive and span two decades");
  }
  IbpProbe probe;
  probe.amplitude = amplitude;
  probe.phase = phase;
  probe.M = M;
  probe.g_l1 = quad::integrate_2d([&](double a, double b) { return st.amp({a, b}); }, st.box, kIbpMinPanels,
                                  kIbpMinPanels);
  probe.floor = floor_rel * probe.g_l1;

  double min_grad = std::numeric_limits<double>::infinity();
  constexpr int n = 64;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Vec2 x{st.box.x0 + (a + 0.5) * st.box.width() / n, st.box.y0 + (b + 0.5) * st.box.height() / n};
      if (st.amp(x) > 0.0) min_grad = std::min(min_grad, norm(st.grad(x)));
    }
  }
  probe.nonstationary = min_grad >= 1.0 - 1e-12;

  std::vector<double> fk, fv;
  for (double K : K_values) {
    const double v = std::abs(ibp_integral(amplitude, phase, K, floor_rel));
    probe.K.push_back(K);
    probe.values.push_back(v);
    if (v > probe.floor) {
      fk.push_back(K);
      fv.push_back(v);
    } else {
      probe.partial = true;
    }
  }
  probe.fitted = static_cast<int>(fk.size());
  if (fk.size() >= 2) {
    const LineFit f = fit_loglog(fk, fv);
    probe.slope = f.slope;
    probe.r2 = f.r2;
  }
  return probe;
}

void write_ibp_probe(const std::filesystem::path& path, const IbpProbe& probe) {
  csv::Writer w(path, {"amplitude", "phase", "M", "K", "abs_integral", "above_floor", "floor", "fitted_slope", "r2"});
  for (std::size_t i = 0; i < probe.K.size(); ++i) {
    w.row(probe.amplitude, probe.phase, probe.M, probe.K[i], probe.values[i], probe.values[i] > probe.floor,
          probe.floor, probe.slope, probe.r2);
  }
}

// ---------------------------------------------------------------------------

double ttstar_rho(const std::string& tag, Vec2 xi, Vec2 eta) {
  if (tag == "zero") return 0.0;
  if (tag != "annular") throw PreconditionError("ttstar: unknown amplitude tag '" + tag + "'");
  return cutoff::phi_range(norm(eta), -1, 1) * cutoff::phi_ge(norm(xi - eta), 0) *
         cutoff::phi_ge(norm(xi - 2.0 * eta), 0) * cutoff::phi_ge(norm(2.0 * xi - eta), 0);
}

Complex ttstar_kernel_eval(const TtStarSpec& spec, Vec2 xi, Vec2 xi_prime, double s, double rel_tol) {
  if (!(spec.R > 0.0)) throw PreconditionError("ttstar: R must be positive");
  if (norm(xi - spec.xi0) > spec.R * (1.0 + 1e-12) || norm(xi_prime - spec.xi0) > spec.R * (1.0 + 1e-12)) {
    throw PreconditionError("ttstar: xi and xi' must lie within R of the center");
  }
  const double loc = cutoff::phi(norm(xi - spec.xi0) / spec.R) * cutoff::phi(norm(xi_prime - spec.xi0) / spec.R);
  if (loc == 0.0) return {};
  (void)ttstar_rho(spec.rho, xi, xi);  // validates the tag
  if (spec.rho == "zero") return {};

  const double strip = cutoff::kSupport * std::ldexp(1.0, spec.q);
  quad::Box box = ball_box({0.0, 0.0}, cutoff::kSupport * 2.0);
  box = quad::intersect(box, {xi.x - strip, xi.x + strip, box.y0, box.y1});
  box = quad::intersect(box, {xi_prime.x - strip, xi_prime.x + strip, box.y0, box.y1});
  if (box.empty()) return {};

  auto phase = [](Vec2 a, Vec2 e) { return dispersion(a) - dispersion(a - e) - dispersion(e); };
  auto integrand = [&](double e1, double e2) -> Complex {
    const Vec2 eta{e1, e2};
    const double w0 = cutoff::phi_k(std::abs(xi.x - e1), spec.q) * cutoff::phi_k(std::abs(xi_prime.x - e1), spec.q);
    if (w0 == 0.0) return {};
    const double rho = ttstar_rho(spec.rho, xi, eta) * ttstar_rho(spec.rho, xi_prime, eta);
    if (rho == 0.0) return {};
    const double a = phase(xi, eta);
    const double b = phase(xi_prime, eta);
    const double w = w0 * rho * cutoff::phi_le(a, spec.p) * cutoff::phi_le(b, spec.p);
    if (w == 0.0) return {};
    const double ph = s * (a - b);
    return w * Complex{std::cos(ph), std::sin(ph)};
  };

  auto inside = [&](Vec2 eta) { return ttstar_rho(spec.rho, xi, eta) * ttstar_rho(spec.rho, xi_prime, eta) > 0.0; };
  auto grad_diff = [&](Vec2 eta) {
    return (dispersion_gradient(xi - eta) - dispersion_gradient(xi_prime - eta));
  };
  auto grad_phi = [&](Vec2 eta) { return dispersion_gradient(xi - eta) - dispersion_gradient(eta); };
  const double gd = max_grad_eta(box, inside, grad_diff);
  const double gp = max_grad_eta(box, inside, grad_phi);

  double feature = kInnerTransition * std::min(1.0, std::ldexp(1.0, spec.q));
  if (s * gd > 0.0) feature = std::min(feature, kTwoPi / (s * gd) * quad::kNodesPerPanel / 8.0);
  if (gp > 0.0) feature = std::min(feature, kOuterTransition * std::ldexp(1.0, spec.p) / gp);
  const int px = panels_for_feature(box.width(), feature, 4);
  const int py = panels_for_feature(box.height(), feature, 4);
  const double mass = quad::integrate_2d([&](double a, double b) { return std::abs(integrand(a, b)); }, box, px, py);
  if (mass == 0.0) return {};
  const auto res = quad::integrate_2d_converged(integrand, box, px, py, rel_tol, 1e-9 * mass, 4);
  return loc * res.value;
}

}  // namespace betaplane::osc
