#include "betaplane/schur.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

#include "betaplane/csv.hpp"
#include "betaplane/cutoff.hpp"
#include "betaplane/errors.hpp"
#include "betaplane/parallel.hpp"
#include "betaplane/quadrature.hpp"

namespace betaplane::schur {

using resonance::dispersion;

namespace {

double lo_radius(int k) { return 0.5 * cutoff::kPlateau * std::ldexp(1.0, k); }
double hi_radius(int k) { return cutoff::kSupport * std::ldexp(1.0, k); }

bool in_shell(double r2, int k) {
  const double lo = lo_radius(k);
  const double hi = hi_radius(k);
  return r2 > lo * lo && r2 < hi * hi;
}

quad::Box ball(Vec2 c, double r) { return {c.x - r, c.x + r, c.y - r, c.y + r}; }

double phase(Vec2 xi, Vec2 eta) { return dispersion(xi) - dispersion(xi - eta) - dispersion(eta); }

constexpr double kTtOuter = 2.0 * cutoff::kSupport;  // |eta| support of the annular rho

quad::Box inner_box(const KernelSpec& s, Vec2 outer, bool row) {
  if (s.which == Family::ttstar) {
    const double strip = hi_radius(s.tt.q);
    if (row) {
      return quad::intersect(ball({0.0, 0.0}, kTtOuter), {outer.x - strip, outer.x + strip, -kTtOuter, kTtOuter});
    }
    const double rr = cutoff::kSupport * s.tt.R;
    return quad::intersect(ball(s.tt.xi0, rr),
                           {outer.x - strip, outer.x + strip, s.tt.xi0.y - rr, s.tt.xi0.y + rr});
  }
  quad::Box box;
  if (row) {
    const Vec2 xi = outer;
    box = ball({0.0, 0.0}, hi_radius(s.b));
    box = quad::intersect(box, ball(xi, hi_radius(s.a)));
    box = quad::intersect(box, ball(0.5 * xi, 0.5 * hi_radius(s.ell)));
    if (s.which == Family::full) box = quad::intersect(box, ball(2.0 * xi, hi_radius(s.r)));
  } else {
    const Vec2 eta = outer;
    box = ball({0.0, 0.0}, hi_radius(s.k));
    box = quad::intersect(box, ball(eta, hi_radius(s.a)));
    box = quad::intersect(box, ball(2.0 * eta, hi_radius(s.ell)));
    if (s.which == Family::full) box = quad::intersect(box, ball(0.5 * eta, 0.5 * hi_radius(s.r)));
  }
  return box;
}

quad::Box outer_box(const KernelSpec& s, bool row) {
  if (s.which == Family::ttstar) {
    return row ? ball(s.tt.xi0, cutoff::kSupport * s.tt.R) : ball({0.0, 0.0}, kTtOuter);
  }
  return ball({0.0, 0.0}, hi_radius(row ? s.k : s.b));
}

bool outer_active(const KernelSpec& s, Vec2 x, bool row) {
  if (s.which == Family::ttstar) {
    if (row) return norm(x - s.tt.xi0) < cutoff::kSupport * s.tt.R;
    const double r = norm(x);
    return r > lo_radius(-1) && r < kTtOuter;
  }
  return in_shell(norm2(x), row ? s.k : s.b);
}

int panels(int resolution) { return (resolution + quad::kNodesPerPanel - 1) / quad::kNodesPerPanel; }

double mass(const KernelSpec& s, Vec2 outer, bool row, int resolution) {
  const quad::Box box = inner_box(s, outer, row);
  if (box.empty()) return 0.0;
  const int n = panels(resolution);
  if (row) return quad::integrate_2d([&](double a, double b) { return kernel(s, outer, {a, b}); }, box, n, n);
  return quad::integrate_2d([&](double a, double b) { return kernel(s, {a, b}, outer); }, box, n, n);
}

struct SupResult {
  double coarse = 0.0;
  double fine = 0.0;
  Vec2 arg;
};

SupResult locate_sup(const KernelSpec& s, bool row, int resolution) {
  const quad::Box box = outer_box(s, row);
  const int g = std::max(16, resolution / 4);
  const double hx = box.width() / g;
  const double hy = box.height() / g;
  std::vector<std::pair<double, Vec2>> cand;
  for (int a = 0; a < g; ++a) {
    for (int b = 0; b < g; ++b) {
      const Vec2 x{box.x0 + (a + 0.5) * hx, box.y0 + (b + 0.5) * hy};
      if (!outer_active(s, x, row)) continue;
      const double m = mass(s, x, row, resolution);
      if (m > 0.0) cand.emplace_back(m, x);
    }
  }
  SupResult res;
  if (cand.empty()) return res;
  const std::size_t keep = std::min<std::size_t>(3, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end(),
                    [](const auto& l, const auto& r) { return l.first > r.first; });
  cand.resize(keep);

  // Local pattern search around each candidate, step halving from half a cell.
  for (auto& [m, x] : cand) {
    double step = 0.5;
    for (int level = 0; level < 4; ++level, step *= 0.5) {
      bool moved = true;
      for (int guard = 0; moved && guard < 8; ++guard) {
        moved = false;
        for (int a = -1; a <= 1; ++a) {
          for (int b = -1; b <= 1; ++b) {
            if (a == 0 && b == 0) continue;
            const Vec2 y = x + Vec2{a * step * hx, b * step * hy};
            if (!outer_active(s, y, row)) continue;
            const double v = mass(s, y, row, resolution);
            if (v > m) {
              m = v;
              x = y;
              moved = true;
            }
          }
        }
      }
    }
  }
  for (const auto& [m, x] : cand) {
    if (m > res.coarse) res.coarse = m;
    const double f = mass(s, x, row, 2 * resolution);
    if (f > res.fine) {
      res.fine = f;
      res.arg = x;
    }
  }
  return res;
}

}  // namespace

std::string KernelSpec::label() const {
  std::ostringstream os;
  switch (which) {
    case Family::full:
      os << "full";
      break;
    case Family::no_r:
      os << "no_r";
      break;
    case Family::ttstar:
      os << "ttstar";
      break;
  }
  if (which == Family::ttstar) {
    os << " p=" << tt.p << " q=" << tt.q << " R=" << tt.R;
  } else {
    os << " p=" << p << " ell=" << ell << " r=" << r << " k=" << k << " a=" << a << " b=" << b;
  }
  return os.str();
}

double kernel(const KernelSpec& s, Vec2 xi, Vec2 eta) {
  if (s.which == Family::ttstar) {
    const double loc = cutoff::phi(norm(xi - s.tt.xi0) / s.tt.R);
    if (loc == 0.0) return 0.0;
    const double q = cutoff::phi_k(std::abs(xi.x - eta.x), s.tt.q);
    if (q == 0.0) return 0.0;
    const double rho = osc::ttstar_rho(s.tt.rho, xi, eta);
    if (rho == 0.0) return 0.0;
    if (norm2(eta) == 0.0 || norm2(xi - eta) == 0.0) return 0.0;
    return loc * q * std::abs(rho) * cutoff::phi_le(phase(xi, eta), s.tt.p);
  }
  const Vec2 d = xi - eta;
  const Vec2 l = xi - 2.0 * eta;
  const Vec2 rr = eta - 2.0 * xi;
  if (!in_shell(norm2(xi), s.k) || !in_shell(norm2(eta), s.b) || !in_shell(norm2(d), s.a) ||
      !in_shell(norm2(l), s.ell)) {
    return 0.0;
  }
  if (s.which == Family::full && !in_shell(norm2(rr), s.r)) return 0.0;
  const double ph = std::abs(phase(xi, eta));
  if (!in_shell(ph * ph, s.p)) return 0.0;
  double w = cutoff::phi_k(ph, s.p) * cutoff::phi_k(norm(xi), s.k) * cutoff::phi_k(norm(eta), s.b) *
             cutoff::phi_k(norm(d), s.a) * cutoff::phi_k(norm(l), s.ell);
  if (s.which == Family::full) w *= cutoff::phi_k(norm(rr), s.r);
  return w;
}

double bound_shape(const KernelSpec& s) {
  switch (s.which) {
    case Family::full:
      return std::exp2(s.p + 0.5 * (s.k + s.b - s.ell - s.r) + 2.0 * s.a +
                       0.5 * std::min({s.ell, s.r, s.a, s.b}) + 0.5 * std::min({s.ell, s.r, s.k, s.a}));
    case Family::no_r:
      return std::exp2(s.p + 0.5 * (s.k + s.b - s.ell + 3.0 * s.a) + 0.5 * std::min({s.ell, s.a, s.b}) +
                       0.5 * std::min({s.ell, s.k, s.a}));
    case Family::ttstar:
      break;
  }
  throw PreconditionError("bound_shape: no closed-form shape for the TT* family");
}

double row_mass(const KernelSpec& spec, Vec2 xi, int resolution) { return mass(spec, xi, true, resolution); }
double col_mass(const KernelSpec& spec, Vec2 eta, int resolution) { return mass(spec, eta, false, resolution); }

SchurEstimate schur_norm_estimate(const KernelSpec& spec, int resolution) {
  if (resolution < 64) throw PreconditionError("schur_norm_estimate: resolution must be >= 64");
  SchurEstimate e;
  e.resolution = resolution;
  const SupResult row = locate_sup(spec, true, resolution);
  const SupResult col = locate_sup(spec, false, resolution);
  e.row_sup = row.fine;
  e.col_sup = col.fine;
  e.row_arg = row.arg;
  e.col_arg = col.arg;
  e.value = std::sqrt(row.fine * col.fine);
  e.coarse_value = std::sqrt(row.coarse * col.coarse);
  e.empty = e.value == 0.0 && e.coarse_value == 0.0;
  if (!e.empty) {
    e.rel_change = std::abs(e.value - e.coarse_value) / std::max(e.value, e.coarse_value);
    e.unreliable = e.rel_change > 0.1;
  }
  return e;
}

std::vector<KernelSpec> select_tuples(std::size_t count, int lo, int hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sample_shell = [&](int k) {
    const double r0 = lo_radius(k), r1 = hi_radius(k);
    const double r = std::sqrt(r0 * r0 + unit(rng) * (r1 * r1 - r0 * r0));
    const double th = 2.0 * std::numbers::pi * unit(rng);
    return Vec2{r * std::cos(th), r * std::sin(th)};
  };
  auto bins = [&](double x) {
    std::vector<int> out;
    for (int j = lo; j <= hi; ++j) {
      if (cutoff::phi_k(x, j) > 0.25) out.push_back(j);
    }
    return out;
  };
  std::map<std::tuple<int, int, int, int, int, int>, int> hits;
  constexpr int kSamples = 400;
  for (int k = lo; k <= hi; ++k) {
    for (int a = lo; a <= hi; ++a) {
      for (int b = lo; b <= hi; ++b) {
        for (int n = 0; n < kSamples; ++n) {
          Vec2 xi, eta;
          // Draw the two smallest of the three shells; the third vector follows.
          if (k >= a && k >= b) {
            const Vec2 d = sample_shell(a);
            eta = sample_shell(b);
            xi = d + eta;
          } else if (a >= k && a >= b) {
            xi = sample_shell(k);
            eta = sample_shell(b);
          } else {
            xi = sample_shell(k);
            eta = xi - sample_shell(a);
          }
          if (cutoff::phi_k(norm(xi), k) < 0.25 || cutoff::phi_k(norm(eta), b) < 0.25 ||
              cutoff::phi_k(norm(xi - eta), a) < 0.25) {
            continue;
          }
          if (norm2(eta) == 0.0 || norm2(xi - eta) == 0.0) continue;
          const double ph = std::abs(phase(xi, eta));
          for (int l : bins(norm(xi - 2.0 * eta))) {
            for (int r : bins(norm(eta - 2.0 * xi))) {
              for (int p : bins(ph)) ++hits[{p, l, r, k, a, b}];
            }
          }
        }
      }
    }
  }
  std::vector<KernelSpec> pool;
  for (const auto& [key, h] : hits) {
    if (h < 3) continue;
    KernelSpec s;
    std::tie(s.p, s.ell, s.r, s.k, s.a, s.b) = key;
    pool.push_back(s);
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  if (pool.size() > count) pool.resize(count);
  return pool;
}

std::vector<KernelSpec> linear_regime_ladder(int lo, int hi, std::uint64_t seed, std::size_t max_geometries) {
  std::vector<KernelSpec> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<KernelSpec> geoms;
  for (int k = lo; k <= hi; ++k) {
    for (int a = lo; a <= hi; ++a) {
      for (int b = lo; b <= hi; ++b) {
        for (int l = lo; l <= hi; ++l) {
          for (int r = lo; r <= hi; ++r) {
            KernelSpec s;
            s.k = k;
            s.a = a;
            s.b = b;
            s.ell = l;
            s.r = r;
            // Band of phi_{p+1} thin against R |grad Phi| in both directions,
            // using the magnitudes |grad_eta Phi| ~ 2^(k+ell-2a-2b) and
            // |grad_xi Phi| ~ 2^(b+r-2k-2a) on the support.
            const double row_scale = std::exp2(std::min({l, r, a, b}) + k + l - 2 * a - 2 * b);
            const double col_scale = std::exp2(std::min({l, r, k, a}) + b + r - 2 * k - 2 * a);
            s.p = static_cast<int>(std::floor(std::log2(0.2 * std::min(row_scale, col_scale) / cutoff::kSupport))) - 1;
            if (s.p < lo) continue;
            geoms.push_back(s);
          }
        }
      }
    }
  }
  // Keep geometries whose support is nonempty and on which Phi changes sign.
  std::shuffle(geoms.begin(), geoms.end(), rng);
  for (auto g : geoms) {
    if (out.size() >= 2 * max_geometries) break;
    int pos = 0, neg = 0;
    for (int n = 0; n < 4000 && (pos < 20 || neg < 20); ++n) {
      const double r0 = lo_radius(g.k), r1 = hi_radius(g.k);
      const double rk = std::sqrt(r0 * r0 + unit(rng) * (r1 * r1 - r0 * r0));
      const double tk = 2.0 * std::numbers::pi * unit(rng);
      const Vec2 xi{rk * std::cos(tk), rk * std::sin(tk)};
      const double ra = lo_radius(g.a) + unit(rng) * (hi_radius(g.a) - lo_radius(g.a));
      const double ta = 2.0 * std::numbers::pi * unit(rng);
      const Vec2 eta = xi - Vec2{ra * std::cos(ta), ra * std::sin(ta)};
      if (!in_shell(norm2(eta), g.b) || !in_shell(norm2(xi - 2.0 * eta), g.ell) ||
          !in_shell(norm2(eta - 2.0 * xi), g.r)) {
        continue;
      }
      if (cutoff::phi_k(norm(xi), g.k) * cutoff::phi_k(norm(eta), g.b) * cutoff::phi_k(norm(xi - eta), g.a) *
              cutoff::phi_k(norm(xi - 2.0 * eta), g.ell) * cutoff::phi_k(norm(eta - 2.0 * xi), g.r) <
          0.5) {
        continue;
      }
      (phase(xi, eta) > 0.0 ? pos : neg)++;
    }
    if (pos < 20 || neg < 20) continue;
    KernelSpec upper = g;
    upper.p = g.p + 1;
    out.push_back(g);
    out.push_back(upper);
  }
  return out;
}

SweepSummary schur_sweep(const std::vector<KernelSpec>& tuples, const std::vector<KernelSpec>& ladder, int resolution,
                         int jobs, int ladder_resolution) {
  if (ladder_resolution == 0) ladder_resolution = resolution;
  SweepSummary sum;
  std::vector<KernelSpec> all = tuples;
  all.insert(all.end(), ladder.begin(), ladder.end());
  sum.rows.resize(all.size());
  parallel_for(all.size(), jobs, [&](std::size_t i) {
    SweepRow row;
    row.spec = all[i];
    row.estimate = schur_norm_estimate(all[i], i < tuples.size() ? resolution : ladder_resolution);
    row.shape = bound_shape(all[i]);
    row.ratio = row.estimate.value / row.shape;
    row.coarse_ratio = row.estimate.coarse_value / row.shape;
    sum.rows[i] = row;
  });
  for (const auto& r : sum.rows) {
    if (r.estimate.empty) continue;
    sum.C = std::max(sum.C, r.ratio);
    sum.C_coarse = std::max(sum.C_coarse, r.coarse_ratio);
    if (r.estimate.unreliable) ++sum.unreliable;
  }
  for (std::size_t i = tuples.size(); i + 1 < sum.rows.size(); i += 2) {
    const auto& lo = sum.rows[i];
    const auto& hi = sum.rows[i + 1];
    if (lo.estimate.value > 0.0) sum.linearity.push_back({lo.spec, hi.estimate.value / lo.estimate.value});
  }
  return sum;
}

void write_sweep(const std::filesystem::path& path, const SweepSummary& summary) {
  csv::Writer w(path, {"family", "p", "ell", "r", "k", "a", "b", "empirical", "bound_shape", "ratio", "coarse_empirical",
                       "rel_change", "unreliable", "fitted_C"});
  for (const auto& r : summary.rows) {
    w.row(r.spec.which == Family::full ? "full" : (r.spec.which == Family::no_r ? "no_r" : "ttstar"), r.spec.p,
          r.spec.ell, r.spec.r, r.spec.k, r.spec.a, r.spec.b, r.estimate.value, r.shape, r.ratio,
          r.estimate.coarse_value, r.estimate.rel_change, r.estimate.unreliable, summary.C);
  }
}

}  // namespace betaplane::schur
