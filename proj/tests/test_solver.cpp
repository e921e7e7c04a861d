#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "betaplane/csv.hpp"
#include "betaplane/errors.hpp"
#include "betaplane/initial_conditions.hpp"
#include "betaplane/kv_config.hpp"
#include "betaplane/solver.hpp"
#include "betaplane/spectral_ops.hpp"

using namespace betaplane;
using spectral::l2_norm;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.grid = GridSpec{64, 24.0};
  c.dt = 0.05;
  c.t_end = 1.0;
  c.amplitude = 0.5;
  c.ic_scale = 1.5;
  c.diag_stride = 5;
  return c;
}

double rel(const SpectralField& a, const SpectralField& b) { return l2_norm(a - b) / l2_norm(b); }

SpectralField advance(const SpectralField& w, double dt, int steps, bool linear = false) {
  solver::Integrator it(w.grid(), dt, linear);
  SpectralField cur = w;
  for (int s = 0; s < steps; ++s) cur = it.step(cur);
  return cur;
}

}  // namespace

TEST_CASE("config validation and round trip") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  auto bad = [](auto mutate) {
    SimConfig b;
    mutate(b);
    CHECK_THROWS_AS(b.validate(), ConfigurationError);
  };
  bad([](SimConfig& b) { b.dt = 0.0; });
  bad([](SimConfig& b) { b.t_end = -1.0; });
  bad([](SimConfig& b) { b.amplitude = -1.0; });
  bad([](SimConfig& b) { b.diag_stride = 0; });
  bad([](SimConfig& b) { b.ic_kind = "tornado"; });
  bad([](SimConfig& b) { b.grid.n = 100; });

  SimConfig d = small_config();
  d.ic_kind = "random";
  d.seed = 99;
  d.linear_only = true;
  KvConfig kv = KvConfig::parse(d.to_kv());
  const SimConfig e = SimConfig::from_kv(kv);
  CHECK_NOTHROW(kv.finish());
  CHECK(e.to_kv() == d.to_kv());
}

TEST_CASE("initial conditions are mean-zero, real and normalized") {
  for (const char* kind : {"vortex-pair", "random", "wave-packet", "gaussian-derivative"}) {
    SimConfig c = small_config();
    c.ic_kind = kind;
    c.amplitude = 0.3;
    const SpectralField w = make_initial_condition(c);
    CHECK(w.zero_mode() == Complex{});
    CHECK(w.conjugate_symmetry_defect() < 1e-12);
    CHECK(spectral::linf_norm(w) == doctest::Approx(0.3).epsilon(1e-12));
  }
  SimConfig z = small_config();
  z.amplitude = 0.0;
  CHECK(l2_norm(make_initial_condition(z)) == 0.0);
}

TEST_CASE("step basics") {
  SimConfig c = small_config();
  c.amplitude = 0.0;
  const SpectralField zero = make_initial_condition(c);
  CHECK(l2_norm(solver::step(zero, 0.1)) == 0.0);

  c.amplitude = 0.5;
  const SpectralField w = make_initial_condition(c);
  const SpectralField lin = solver::step(w, 0.1, true);
  CHECK(rel(lin, spectral::l1_semigroup(w, 0.1)) < 1e-12);
  CHECK(solver::step(w, 0.1).zero_mode() == Complex{});
}

TEST_CASE("integrating-factor RK4 converges at fourth order") {
  SimConfig c = small_config();
  c.amplitude = 2.0;
  const SpectralField w = make_initial_condition(c);
  const double T = 1.0;
  const SpectralField a = advance(w, T / 20, 20);
  const SpectralField b = advance(w, T / 40, 40);
  const SpectralField d = advance(w, T / 80, 80);
  const double order = std::log2(l2_norm(a - b) / l2_norm(b - d));
  MESSAGE("observed order " << order);
  CHECK(order >= 3.8);
}

TEST_CASE("time reversal") {
  SimConfig c = small_config();
  const SpectralField w = make_initial_condition(c);
  const SpectralField fwd = advance(w, 0.05, 1);
  const SpectralField back = advance(fwd, -0.05, 1);
  CHECK(rel(back, w) < 1e-10);
}

TEST_CASE("CFL violation raises a step-size error") {
  SimConfig c = small_config();
  c.amplitude = 50.0;
  const SpectralField w = make_initial_condition(c);
  solver::Integrator it(c.grid, 1.0);
  CHECK(it.cfl(w) > solver::kMaxCfl);
  try {
    it.step(w);
    FAIL("expected StepSizeError");
  } catch (const StepSizeError& e) {
    CHECK(e.max_velocity() > 0.0);
  }
}

TEST_CASE("short run conserves the L2 norms") {
  SimConfig c;
  c.grid = GridSpec{128, 32.0};
  c.ic_kind = "wave-packet";
  c.ic_k = 2;
  c.ic_j = 1;
  c.amplitude = 1e-2;
  c.t_end = 5.0;
  c.dt = 0.05;
  c.diag_stride = 20;
  solver::RunOptions o;
  o.x_norm_diagnostic = false;
  const solver::RunResult r = solver::run(c, o);
  REQUIRE_FALSE(r.aborted);
  const auto& first = r.records.front();
  for (const auto& rec : r.records) {
    CHECK(std::abs(rec.l2_omega / first.l2_omega - 1.0) <= 1e-8);
    CHECK(std::abs(rec.l2_u / first.l2_u - 1.0) <= 1e-8);
    CHECK(rec.tail_mass >= 0.0);
    CHECK(rec.tail_mass <= 1.0);
  }
  CHECK(r.steps == 100);
  CHECK(r.t_final == doctest::Approx(5.0));
  // records at 0, every 20 steps, and the last step
  REQUIRE(r.records.size() == 6);
  CHECK(r.records[1].t == doctest::Approx(1.0));
}

TEST_CASE("zero amplitude gives constant diagnostics") {
  SimConfig c = small_config();
  c.amplitude = 0.0;
  const solver::RunResult r = solver::run(c);
  REQUIRE(r.records.size() > 2);
  for (const auto& rec : r.records) {
    CHECK(rec.l2_omega == 0.0);
    CHECK(rec.l2_u == 0.0);
    CHECK(rec.linf_omega == 0.0);
    CHECK(rec.h_n == 0.0);
  }
}

TEST_CASE("tail-mass abort keeps the partial series") {
  SimConfig c;
  c.grid = GridSpec{64, 16.0};
  c.ic_kind = "gaussian-derivative";
  c.ic_scale = 1.0;
  c.amplitude = 1e-3;
  c.linear_only = true;
  c.t_end = 200.0;
  c.dt = 0.5;
  solver::RunOptions o;
  o.x_norm_diagnostic = false;
  const solver::RunResult r = solver::run(c, o);
  CHECK(r.aborted);
  CHECK(r.abort_reason == "tail-mass");
  CHECK(r.t_final < 200.0);
  CHECK(r.records.back().tail_mass > solver::kTailAbort);
}

TEST_CASE("profiles") {
  SimConfig c = small_config();
  const SpectralField w = make_initial_condition(c);
  CHECK(rel(solver::profile(w, 0.0), w) == 0.0);

  c.linear_only = true;
  c.t_end = 2.0;
  const SpectralField f0 = solver::profile(w, 0.0);
  double worst = 0.0;
  solver::RunOptions o;
  o.x_norm_diagnostic = false;
  o.observer = [&](int, double t, const SpectralField& cur) { worst = std::max(worst, rel(solver::profile(cur, t), f0)); };
  solver::run(c, w, o);
  CHECK(worst < 1e-12);
}

TEST_CASE("the profile moves quadratically in the amplitude") {
  auto drift = [](double amp) {
    SimConfig c;
    c.grid = GridSpec{128, 32.0};
    c.ic_kind = "wave-packet";
    c.ic_k = 2;
    c.ic_j = 1;
    c.amplitude = amp;
    c.t_end = 10.0;
    c.dt = 0.1;
    SpectralField f1(c.grid), f2(c.grid);
    solver::RunOptions o;
    o.x_norm_diagnostic = false;
    o.observer = [&](int step, double t, const SpectralField& cur) {
      if (step == 10) f1 = solver::profile(cur, t);
      if (step == 100) f2 = solver::profile(cur, t);
    };
    solver::run(c, o);
    return l2_norm(f2 - f1) / (amp * amp * 9.0);
  };
  const double c1 = drift(1e-3);
  const double c2 = drift(2e-3);
  CHECK(std::isfinite(c1));
  CHECK(c1 > 0.0);
  CHECK(c2 / c1 == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("d_t profile scan") {
  SimConfig c;
  c.grid = GridSpec{256, 192.0};
  c.ic_kind = "gaussian-derivative";
  c.ic_scale = 2.0;
  c.ic_order = 6;
  c.ic_aniso = 1;
  c.amplitude = 1e-3;
  c.dt = 0.05;
  c.linear_only = true;
  const solver::DtProfileScan lin = solver::dt_profile_decay_scan(c, {2.0, 4.0});
  CHECK(lin.all_zero);

  c.linear_only = false;
  const solver::DtProfileScan a = solver::dt_profile_decay_scan(c, {2.0, 4.0});
  c.amplitude = 2e-3;
  const solver::DtProfileScan b = solver::dt_profile_decay_scan(c, {2.0, 4.0});
  REQUIRE(a.values.size() == 2);
  CHECK(b.values[0] / a.values[0] == doctest::Approx(4.0).epsilon(0.2));
  // centered differences agree with the direct evaluation of the forcing
  CHECK(a.values[0] == doctest::Approx(a.direct[0]).epsilon(1e-3));

  namespace fs = std::filesystem;
  const fs::path p = fs::temp_directory_path() / "betaplane_dtp.csv";
  fs::remove(p);
  solver::write_dt_profile_scan(p, a);
  CHECK(csv::read(p).header ==
        std::vector<std::string>{"t", "dt_profile_p0", "direct_p0", "fitted_slope", "r2", "inconclusive"});
  fs::remove(p);
}

TEST_CASE("diagnostics csv") {
  SimConfig c = small_config();
  c.t_end = 0.2;
  c.diag_stride = 2;
  const solver::RunResult r = solver::run(c);
  namespace fs = std::filesystem;
  const fs::path p = fs::temp_directory_path() / "betaplane_diag.csv";
  fs::remove(p);
  solver::write_diagnostics(p, r.records);
  const csv::Table t = csv::read(p);
  CHECK(t.header == std::vector<std::string>{"t", "l2_omega", "l2_u", "h_n", "linf_omega", "linf_du", "x_norm_profile",
                                             "tail_mass", "cfl"});
  CHECK(t.rows.size() == r.records.size());
  CHECK(t.number(0, "t") == 0.0);
  CHECK(t.number(0, "x_norm_profile") > 0.0);
  fs::remove(p);
}

TEST_CASE("dyadic profile windows") {
  SimConfig c;
  c.grid = GridSpec{128, 64.0};
  c.ic_kind = "wave-packet";
  c.ic_k = 1;
  c.ic_j = 2;
  c.t_end = 8.0;
  c.diag_stride = 40;
  solver::RunOptions o;
  o.x_norm_diagnostic = false;
  o.profile_windows = true;
  c.linear_only = true;
  const auto lin = solver::run(c, o);
  REQUIRE(lin.windows.size() == 3);
  CHECK(lin.windows[0].t1 == doctest::Approx(1.0));
  CHECK(lin.windows[2].t2 == doctest::Approx(8.0));
  const double base = l2_norm(lin.final_omega);
  for (const auto& w : lin.windows) CHECK(w.l2_diff <= 1e-12 * base);

  c.linear_only = false;
  c.amplitude = 0.05;
  const auto nl = solver::run(c, o);
  REQUIRE(nl.windows.size() == 3);
  for (const auto& w : nl.windows) {
    CHECK(w.l2_diff > 0.0);
    CHECK(w.l2_diff < 1e-2 * base);
    CHECK((std::isnan(w.x_norm_diff) || w.x_norm_diff > 0.0));
  }
}

TEST_CASE("H^N growth bound holds with the constant fitted at the larger amplitude") {
  // h_n(t) / h_n(0) <= (1 + t)^(C amplitude): fit C at amplitude a, check it
  // still bounds the run at a / 2.
  auto fitted_c = [](double amplitude) {
    SimConfig c;
    c.grid = GridSpec{256, 64.0};
    c.ic_kind = "random";
    c.ic_k = 2;
    c.ic_j = 2;
    c.t_end = 10.0;
    c.amplitude = amplitude;
    c.diag_stride = 20;
    solver::RunOptions o;
    o.x_norm_diagnostic = false;
    const auto r = solver::run(c, o);
    REQUIRE_FALSE(r.aborted);
    double C = 0.0;
    for (const auto& d : r.records) {
      if (d.t > 0.0) C = std::max(C, std::log(d.h_n / r.records.front().h_n) / (amplitude * std::log1p(d.t)));
    }
    return C;
  };
  const double c1 = fitted_c(0.04);
  const double c2 = fitted_c(0.02);
  MESSAGE("C(0.04) = " << c1 << ", C(0.02) = " << c2);
  CHECK(std::isfinite(c1));
  CHECK(c2 <= c1);
}
