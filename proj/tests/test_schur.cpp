#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "betaplane/csv.hpp"
#include "betaplane/cutoff.hpp"
#include "betaplane/errors.hpp"
#include "betaplane/resonance.hpp"
#include "betaplane/schur.hpp"

using namespace betaplane;
using namespace betaplane::schur;

namespace {

// Midpoint sum of K(xi, .) over [-B, B]^2.
double riemann_row(const KernelSpec& s, Vec2 xi, double B, int n) {
  const double h = 2.0 * B / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) sum += kernel(s, xi, {-B + (i + 0.5) * h, -B + (j + 0.5) * h});
  }
  return sum * h * h;
}

KernelSpec spec_of(int p, int ell, int r, int k, int a, int b) {
  KernelSpec s;
  s.p = p;
  s.ell = ell;
  s.r = r;
  s.k = k;
  s.a = a;
  s.b = b;
  return s;
}

}  // namespace

TEST_CASE("kernel is the product of its cutoffs") {
  const KernelSpec s = spec_of(0, 0, 1, 0, 0, 0);
  const Vec2 xi{1.0, 0.3}, eta{-0.2, 0.9};
  const resonance::FreqPair fp{xi, eta};
  const double expect = cutoff::phi_k(resonance::phase(fp), 0) * cutoff::phi_k(norm(xi - 2.0 * eta), 0) *
                        cutoff::phi_k(norm(eta - 2.0 * xi), 1) * cutoff::phi_k(norm(xi), 0) *
                        cutoff::phi_k(norm(xi - eta), 0) * cutoff::phi_k(norm(eta), 0);
  CHECK(kernel(s, xi, eta) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(kernel(s, {5.0, 0.0}, eta) == 0.0);
  KernelSpec nr = s;
  nr.which = Family::no_r;
  CHECK(kernel(nr, xi, eta) >= kernel(s, xi, eta));
}

TEST_CASE("shape formula") {
  CHECK(bound_shape(spec_of(0, 0, 0, 0, 0, 0)) == doctest::Approx(1.0));
  CHECK(bound_shape(spec_of(1, 0, 0, 0, 0, 0)) == doctest::Approx(2.0));
  // 2^(p + (k+b-ell-r)/2 + 2a) 2^(min/2 + min/2) at p=-1, ell=1, r=2, k=0, a=1, b=3
  CHECK(bound_shape(spec_of(-1, 1, 2, 0, 1, 3)) == doctest::Approx(std::pow(2.0, -1.0 + 0.0 + 2.0 + 0.5 + 0.0)));
  KernelSpec tt;
  tt.which = Family::ttstar;
  CHECK_THROWS_AS(bound_shape(tt), PreconditionError);
}

TEST_CASE("row and column masses against a Riemann sum") {
  const auto tuples = select_tuples(4, -1, 1, 7);
  REQUIRE(tuples.size() == 4);
  for (const KernelSpec& s : tuples) {
    const SchurEstimate e = schur_norm_estimate(s, 64);
    REQUIRE_FALSE(e.empty);
    CHECK(e.value > 0.0);
    const double B = 1.6 * std::ldexp(1.0, std::max(s.b, 0)) + 0.1;
    const double ref = riemann_row(s, e.row_arg, B, 1600);
    CHECK(row_mass(s, e.row_arg, 128) == doctest::Approx(ref).epsilon(2e-3));
    CHECK(e.value == doctest::Approx(std::sqrt(e.row_sup * e.col_sup)));
  }
  CHECK_THROWS_AS(schur_norm_estimate(tuples[0], 32), PreconditionError);
}

TEST_CASE("tuple selection is seeded and nonempty") {
  const auto a = select_tuples(6, -2, 2, 3);
  const auto b = select_tuples(6, -2, 2, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].label() == b[i].label());
}

TEST_CASE("small sweep and its csv") {
  const auto tuples = select_tuples(3, -1, 1, 5);
  const SweepSummary s = schur_sweep(tuples, {}, 64, 2);
  CHECK(s.rows.size() == 3);
  CHECK(s.C >= s.rows[0].ratio);
  const auto path = std::filesystem::temp_directory_path() / "betaplane_sweep_test.csv";
  write_sweep(path, s);
  const csv::Table t = csv::read(path);
  CHECK(t.rows.size() == 3);
  for (const char* col : {"family", "p", "ell", "r", "k", "a", "b", "empirical", "bound_shape", "ratio", "fitted_C"})
    CHECK_NOTHROW(t.column(col));
  std::filesystem::remove(path);
}
