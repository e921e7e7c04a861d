#include "betaplane/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "betaplane/csv.hpp"
#include "betaplane/errors.hpp"
#include "betaplane/fit.hpp"

namespace betaplane::resonance {

namespace {

void guard(double value, const char* what, const FreqPair& p) {
  if (!(value >= kGuard)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "singular configuration: " << what << " = " << value << " below guard at xi = (" << p.xi.x << ", "
        << p.xi.y << "), eta = (" << p.eta.x << ", " << p.eta.y << ")";
    throw SingularConfigurationError(msg.str());
  }
}

Vec2 unit_perp(Vec2 v) { return (1.0 / norm(v)) * perp(v); }

}  // namespace

void check_pair(const FreqPair& p) {
  guard(norm(p.xi), "|xi|", p);
  guard(norm(p.eta), "|eta|", p);
  guard(norm(p.xi - p.eta), "|xi - eta|", p);
}

double dispersion(Vec2 x) { return x.x / norm2(x); }

Vec2 dispersion_gradient(Vec2 x) {
  const double r2 = norm2(x);
  const double r4 = r2 * r2;
  return {(x.y * x.y - x.x * x.x) / r4, -2.0 * x.x * x.y / r4};
}

double phase(const FreqPair& p) {
  check_pair(p);
  return dispersion(p.xi) - dispersion(p.xi - p.eta) - dispersion(p.eta);
}

Vec2 grad_xi(const FreqPair& p) {
  check_pair(p);
  return dispersion_gradient(p.xi) - dispersion_gradient(p.xi - p.eta);
}

Vec2 grad_eta(const FreqPair& p) {
  check_pair(p);
  return dispersion_gradient(p.xi - p.eta) - dispersion_gradient(p.eta);
}

double grad_xi_magnitude(const FreqPair& p) {
  check_pair(p);
  return norm(p.eta) * norm(p.eta - 2.0 * p.xi) / (norm2(p.xi - p.eta) * norm2(p.xi));
}

double grad_eta_magnitude(const FreqPair& p) {
  check_pair(p);
  return norm(p.xi) * norm(p.xi - 2.0 * p.eta) / (norm2(p.xi - p.eta) * norm2(p.eta));
}

double grad_eta_norm(const FreqPair& p) { return norm(grad_eta(p)); }

double symbol_orig(const FreqPair& p) {
  check_pair(p);
  return dot(p.xi, perp(p.eta)) / norm2(p.eta);
}

double symbol_sym(const FreqPair& p) {
  check_pair(p);
  return 0.5 * dot(p.xi, perp(p.eta)) * dot(p.xi, p.xi - 2.0 * p.eta) / (norm2(p.eta) * norm2(p.xi - p.eta));
}

Mat2 mixed_hessian(const FreqPair& p, double rel_step) {
  // d_xi grad_eta Phi = Hess L(xi - eta); only the grad L(xi - eta) term of
  // grad_eta Phi moves with xi, so the constant grad L(eta) is left out of the
  // difference quotient (it can be large and would cancel to round-off).
  const Vec2 d = p.xi - p.eta;
  Mat2 m;
  for (int a = 0; a < 2; ++a) {
    const double h = rel_step * norm(d);
    Vec2 plus = d, minus = d;
    (a == 0 ? plus.x : plus.y) += h;
    (a == 0 ? minus.x : minus.y) -= h;
    const Vec2 q = (1.0 / (2.0 * h)) * (dispersion_gradient(plus) - dispersion_gradient(minus));
    m.a[a][0] = q.x;
    m.a[a][1] = q.y;
  }
  return m;
}

ResonanceDiagnostics curvature(const FreqPair& p) {
  check_pair(p);
  guard(norm(p.xi - 2.0 * p.eta), "|xi - 2 eta|", p);
  guard(norm(p.eta - 2.0 * p.xi), "|eta - 2 xi|", p);
  ResonanceDiagnostics d;
  d.pair = p;
  d.phi = phase(p);
  d.grad_xi = grad_xi(p);
  d.grad_eta = grad_eta(p);
  d.m_orig = symbol_orig(p);
  d.m_sym = symbol_sym(p);
  const Mat2 h = mixed_hessian(p);
  const Vec2 vx = unit_perp(d.grad_xi);
  const Vec2 ve = unit_perp(d.grad_eta);
  d.upsilon = vx.x * (h.a[0][0] * ve.x + h.a[0][1] * ve.y) + vx.y * (h.a[1][0] * ve.x + h.a[1][1] * ve.y);
  const double r2 = norm2(p.xi - p.eta);
  d.gamma = d.upsilon * std::pow(r2, 4) * norm(d.grad_xi) * norm(d.grad_eta);
  d.theta = d.phi * r2;
  d.identity_residual = std::abs(0.5 * d.gamma - 2.0 * d.theta - 3.0 * (p.xi.x - p.eta.x));
  return d;
}

double grad_check(const FreqPair& p, double rel_step) {
  check_pair(p);
  const Vec2 gx = grad_xi(p);
  const Vec2 ge = grad_eta(p);
  const double sx = std::max(norm(gx), 1e-300);
  const double se = std::max(norm(ge), 1e-300);
  double worst = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int which = 0; which < 2; ++which) {
      // Step scaled to the nearest singularity of the moving terms.
      const double scale = which == 0 ? std::min(norm(p.xi), norm(p.xi - p.eta))
                                      : std::min(norm(p.eta), norm(p.xi - p.eta));
      const double h = rel_step * scale;
      // Terms of Phi that do not move with the perturbed vector are dropped
      // from the quotient; they only add cancellation error.
      auto moving = [&](double d) {
        FreqPair q = p;
        Vec2& v = which == 0 ? q.xi : q.eta;
        (a == 0 ? v.x : v.y) += d;
        return which == 0 ? dispersion(q.xi) - dispersion(q.xi - q.eta)
                          : -dispersion(q.xi - q.eta) - dispersion(q.eta);
      };
      const double fd = (-moving(2.0 * h) + 8.0 * moving(h) - 8.0 * moving(-h) + moving(-2.0 * h)) / (12.0 * h);
      const double an = which == 0 ? (a == 0 ? gx.x : gx.y) : (a == 0 ? ge.x : ge.y);
      worst = std::max(worst, std::abs(fd - an) / (which == 0 ? sx : se));
    }
  }
  worst = std::max(worst, std::abs(norm(gx) - grad_xi_magnitude(p)) / sx);
  worst = std::max(worst, std::abs(norm(ge) - grad_eta_magnitude(p)) / se);
  return worst;
}

NullScan null_order_scan(const PairSymbol& symbol, Vec2 eta, Vec2 direction, std::span<const double> eps) {
  if (eps.size() < 2) throw PreconditionError("null_order_scan: need at least two eps values");
  const auto [lo, hi] = std::minmax_element(eps.begin(), eps.end());
  if (!(*lo > 0.0 && *hi <= 0.1)) throw PreconditionError("null_order_scan: eps must lie in (0, 0.1]");
  if (*hi / *lo < 100.0 * (1.0 - 1e-12)) throw PreconditionError("null_order_scan: eps must span two decades");
  const double dn = norm(direction);
  if (!(dn > 0.0)) throw PreconditionError("null_order_scan: zero direction");
  const double base = std::atan2(direction.y, direction.x);

  NullScan scan;
  for (double e : eps) {
    double sup = 0.0;
    for (int r = 0; r < 16; ++r) {
      const double a = base + r * std::numbers::pi / 8.0;
      const FreqPair p{2.0 * eta + e * Vec2{std::cos(a), std::sin(a)}, eta};
      sup = std::max(sup, std::abs(symbol(p)));
    }
    scan.eps.push_back(e);
    scan.sup_values.push_back(sup);
  }
  scan.degenerate = std::all_of(scan.sup_values.begin(), scan.sup_values.end(), [](double v) { return v < 1e-14; });
  if (scan.degenerate) return scan;
  const LineFit f = fit_loglog(scan.eps, scan.sup_values);
  scan.slope = f.slope;
  scan.r2 = f.r2;
  return scan;
}

std::vector<FreqPair> sample_pairs(std::size_t count, double box, double margin, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<FreqPair> out;
  out.reserve(count);
  while (out.size() < count) {
    const FreqPair p{{u(rng), u(rng)}, {u(rng), u(rng)}};
    if (norm(p.xi) < margin || norm(p.eta) < margin || norm(p.xi - p.eta) < margin ||
        norm(p.xi - 2.0 * p.eta) < margin || norm(p.eta - 2.0 * p.xi) < margin) {
      continue;
    }
    out.push_back(p);
  }
  return out;
}

void write_scan(const std::filesystem::path& path, const std::vector<ResonanceDiagnostics>& rows) {
  csv::Writer w(path, {"xi1", "xi2", "eta1", "eta2", "phi", "grad_xi_mag", "grad_eta_mag", "m_orig", "m_sym", "gamma",
                       "theta", "upsilon", "identity_residual"});
  for (const auto& d : rows) {
    w.row(d.pair.xi.x, d.pair.xi.y, d.pair.eta.x, d.pair.eta.y, d.phi, norm(d.grad_xi), norm(d.grad_eta), d.m_orig,
          d.m_sym, d.gamma, d.theta, d.upsilon, d.identity_residual);
  }
}

}  // namespace betaplane::resonance
