#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "betaplane/csv.hpp"
#include "betaplane/cutoff.hpp"
#include "betaplane/errors.hpp"
#include "betaplane/fit.hpp"
#include "betaplane/initial_conditions.hpp"
#include "betaplane/littlewood_paley.hpp"
#include "betaplane/spectral_ops.hpp"
#include "oracles.hpp"

using namespace betaplane;

namespace {

SpectralField mean_zero(SpectralField f) {
  f(0, 0) = Complex{};
  return f;
}

// cos(2^k x1) Gaussian(width s) centered at offset from the torus center.
SpectralField packet(const GridSpec& g, int k, double s, Vec2 off) {
  PhysicalField f(g);
  const Vec2 c = g.center() + off;
  for (int p = 0; p < g.n; ++p) {
    for (int q = 0; q < g.n; ++q) {
      const Vec2 x = g.position(p, q) - c;
      f(p, q) = std::cos(std::ldexp(1.0, k) * x.x) * std::exp(-norm2(x) / (2.0 * s * s));
    }
  }
  return mean_zero(SpectralField::from_physical(f));
}

}  // namespace

TEST_CASE("cutoff profile") {
  using namespace cutoff;
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  CHECK(phi(0.0) == 1.0);
  CHECK(phi(1.25) == 1.0);
  CHECK(phi(-1.25) == 1.0);
  CHECK(phi(1.6) == 0.0);
  CHECK(phi(2.0) == 0.0);
  double prev = 1.0, worst_d2 = 0.0;
  const double h = 1e-4;
  for (double x = 1.25; x <= 1.6; x += 1e-3) {
    CHECK(phi(x) <= prev);
    CHECK(phi(x) == phi(-x));
    prev = phi(x);
    worst_d2 = std::max(worst_d2, std::abs(phi(x + h) - 2.0 * phi(x) + phi(x - h)) / (h * h));
  }
  CHECK(std::isfinite(worst_d2));
  CHECK(worst_d2 < 1e3);
  CHECK(phi_k(1.0, 0) == 1.0);
  CHECK(phi_k(8.0, 3) == 1.0);
}

TEST_CASE("dyadic partitions of unity") {
  using namespace cutoff;
  for (double x = 0.01; x < 500.0; x *= 1.037) {
    double s = 0.0;
    for (int k = -12; k <= 14; ++k) s += phi_k(x, k);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    double r = 0.0;
    for (int k = -2; k <= 3; ++k) r += phi_k(x, k);
    CHECK(phi_range(x, -2, 3) == doctest::Approx(r).epsilon(1e-13));
    CHECK(phi_le(x, 1) + phi_ge(x, 2) == doctest::Approx(1.0).epsilon(1e-15));
  }
  for (int k : {-3, 0, 2}) {
    for (double x = 0.0; x < 300.0; x += 0.37) {
      double s = 0.0;
      for (int j = min_j(k); j <= 12; ++j) s += phi_jk(x, k, j);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("project_pk") {
  GridSpec g{64, 2.0 * std::numbers::pi};  // k_min = 1
  SpectralField one(g);
  one(4, 0) = 1.0;
  one(g.n - 4, 0) = 1.0;
  const SpectralField p = lp::project_pk(one, 2);
  CHECK(std::abs(p(4, 0) - Complex{1.0, 0.0}) < 1e-15);

  const SpectralField w = oracle::random_modes(g, 20, 3);
  const lp::KRange kr = lp::resolved_k_range(g);
  SpectralField sum(g);
  for (int k = kr.lo; k <= kr.hi; ++k) sum += lp::project_pk(w, k);
  CHECK(spectral::l2_norm(sum - w) / spectral::l2_norm(w) < 1e-12);

  for (int k = kr.lo; k <= kr.hi; ++k) {
    for (int d : {2, 3}) {
      CHECK(spectral::l2_norm(lp::project_pk(lp::project_pk(w, k), k + d)) == 0.0);
    }
  }
  CHECK_FALSE(lp::pk_in_range(g, 40));
  CHECK(spectral::l2_norm(lp::project_pk(w, 40)) == 0.0);
  CHECK(spectral::l2_norm(lp::project_pk(w, -40)) == 0.0);
}

TEST_CASE("atoms reconstruct the band and localize in space") {
  GridSpec g{256, 64.0};
  const int k = 1;
  const SpectralField w = packet(g, k, 1.5, {16.0, 0.0});
  const SpectralField pk = lp::project_pk(w, k);
  SpectralField sum(g);
  double total = 0.0, at_j0 = 0.0;
  for (int j = cutoff::min_j(k); j <= lp::default_j_max(g); ++j) {
    const SpectralField a = lp::atom_qjk(w, {k, j});
    sum += a;
    const double m = std::pow(spectral::l2_norm(a), 2);
    total += m;
    if (j == 4) at_j0 = m;
  }
  const SpectralField target = lp::project_range(pk, k - 2, k + 2);
  CHECK(spectral::l2_norm(sum - target) / spectral::l2_norm(target) < 1e-10);
  CHECK(at_j0 >= 0.5 * total);

  CHECK(spectral::l2_norm(lp::atom_qjk(SpectralField(g), {0, 0})) == 0.0);
  CHECK_THROWS_AS(lp::atom_qjk(w, {1, -1}), IndexError);
  CHECK_THROWS_AS(lp::atom_qjk(w, {-2, 1}), IndexError);
  CHECK_NOTHROW(lp::atom_qjk(w, {-2, 2}));
}

TEST_CASE("sobolev norm") {
  GridSpec g{64, 16.0};
  SpectralField m(g);
  m(3, 1) = Complex{0.3, 0.4};
  m(g.n - 3, g.n - 1) = Complex{0.3, -0.4};
  const double r = norm(g.xi(3, 1));
  for (double n : {0.0, 1.0, 2.5, 4.0}) {
    CHECK(lp::sobolev_norm(m, n) == doctest::Approx(std::pow(1.0 + r * r, n / 2.0) * spectral::l2_norm(m)).epsilon(1e-13));
  }
  const SpectralField w = oracle::random_modes(g, 10, 9);
  CHECK(lp::sobolev_norm(w, 0.0) == doctest::Approx(spectral::l2_norm(w)).epsilon(1e-14));
  CHECK(lp::sobolev_norm(spectral::l1_semigroup(w, 123.0), 4.0) == doctest::Approx(lp::sobolev_norm(w, 4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(lp::sobolev_norm(w, -1.0), PreconditionError);
}

TEST_CASE("x-norm homogeneity, argmax stability and report") {
  GridSpec g{128, 64.0};
  SimConfig c;
  c.grid = g;
  c.ic_kind = "wave-packet";
  c.ic_k = 0;
  c.ic_j = 1;
  c.amplitude = 1.0;
  const SpectralField w = make_initial_condition(c);
  const lp::NormReport r = lp::x_norm(w);
  CHECK(r.delta == 0.5e-4);
  CHECK(r.captured_fraction >= 1.0 - 1e-6);
  double best = 0.0;
  for (const auto& a : r.per_atom) {
    best = std::max(best, a.weighted_value);
    CHECK(a.weight == doctest::Approx(lp::x_weight(a.idx, r.delta)));
    CHECK(a.idx.admissible());
  }
  CHECK(r.x_norm == best);
  for (double s : {0.01, 3.0, 250.0}) {
    const lp::NormReport rs = lp::x_norm(s * w);
    CHECK(rs.x_norm == doctest::Approx(s * r.x_norm).epsilon(1e-12));
    CHECK(rs.argmax == r.argmax);
  }
  CHECK_THROWS_AS(lp::x_norm(w, 0.0), PreconditionError);
  CHECK_THROWS_AS(lp::x_norm(w, 0.2), PreconditionError);

  CHECK(lp::x_weight({2, 3}, 0.0) == doctest::Approx(std::exp2(5 + 8)));
  CHECK(lp::x_weight({-2, 3}, 0.0) == doctest::Approx(2.0));

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "betaplane_lp_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  lp::write_report(r, dir / "atoms.csv", dir / "summary.csv");
  const csv::Table atoms = csv::read(dir / "atoms.csv");
  CHECK(atoms.header == std::vector<std::string>{"k", "j", "atom_l2", "weight", "weighted_value"});
  CHECK(atoms.rows.size() == r.per_atom.size());
  const csv::Table sum = csv::read(dir / "summary.csv");
  CHECK(sum.number(0, "x_norm") == doctest::Approx(r.x_norm));
  CHECK(sum.number(0, "delta") == 0.5e-4);
  fs::remove_all(dir);
}

TEST_CASE("x-norm grows like 2^(j(1+delta)) under translation") {
  GridSpec g{256, 256.0};
  const double delta = 0.05;
  std::vector<double> js, logs;
  for (int j1 = 3; j1 <= 6; ++j1) {
    const SpectralField w = packet(g, 0, 1.0, {std::ldexp(1.0, j1), 0.0});
    const lp::NormReport r = lp::x_norm(w, delta);
    js.push_back(j1);
    logs.push_back(std::log2(r.x_norm));
  }
  const LineFit f = fit_line(js, logs);
  CHECK(f.slope == doctest::Approx(1.0 + delta).epsilon(0.05));
}

TEST_CASE("x-norm truncation") {
  GridSpec g{128, 64.0};
  const SpectralField w = packet(g, 0, 1.0, {20.0, 0.0});
  try {
    lp::x_norm(w, 0.5e-4, 2, lp::resolved_k_range(g));
    FAIL("expected truncation error");
  } catch (const TruncationError& e) {
    CHECK(e.achieved() < 1.0 - 1e-6);
  }
}

TEST_CASE("atom almost orthogonality and the L1 chain") {
  GridSpec g{128, 64.0};
  for (unsigned seed : {1u, 2u}) {
    SimConfig c;
    c.grid = g;
    c.ic_kind = "random";
    c.ic_k = 0;
    c.ic_j = 2;
    c.seed = seed;
    c.amplitude = 1.0;
    const SpectralField w = make_initial_condition(c);
    const lp::NormReport r = lp::x_norm(w);
    double atoms = 0.0;
    for (const auto& a : r.per_atom) atoms += a.atom_l2 * a.atom_l2;
    CHECK(r.l2 * r.l2 <= 10.0 * atoms);

    const int k = 0;
    double chain = 0.0;
    for (const auto& a : r.per_atom) {
      if (a.idx.k == k) chain += std::ldexp(a.atom_l2, a.idx.j);
    }
    const double l1 = spectral::l1_norm(lp::project_pk(w, k).to_physical());
    CHECK(l1 / chain < 20.0);
  }
}
