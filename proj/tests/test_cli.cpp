#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "betaplane/csv.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;
using namespace betaplane;

namespace {

fs::path scratch(const std::string& name) {
  const char* base = std::getenv("BETAPLANE_TEST_TMP");
  fs::path dir = fs::path(base ? base : fs::temp_directory_path().string()) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

const char* kSmallSim =
    "n = 32\nl = 16\ndt = 0.05\nt_end = 0.5\namplitude = 0.05\nic_kind = vortex-pair\ndiag_stride = 5\n";

void require_columns(const csv::Table& t, std::initializer_list<const char*> cols) {
  for (const char* c : cols) CHECK_NOTHROW(t.column(c));
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  const Run r = run({"no-such-command", "--out", "x"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: code=2 kind=usage message=", 0) == 0);
  CHECK(run({"run-sim"}).code == 2);
}

TEST_CASE("config errors are reported with kind and code") {
  const fs::path d = scratch("config_errors");
  const Run unknown = run({"nullform-check", "--out", (d / "a").string(), "--config",
                           write_config(d, "u.cfg", "etaa = 1, 2\n").string()});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("kind=parse") != std::string::npos);
  const Run bad_grid = run({"run-sim", "--out", (d / "b").string(), "--config",
                            write_config(d, "g.cfg", "n = 24\n").string()});
  CHECK(bad_grid.code == 3);
  CHECK(bad_grid.err.find("kind=configuration") != std::string::npos);
  const Run missing = run({"run-sim", "--out", (d / "c").string(), "--config", (d / "nope.cfg").string()});
  CHECK(missing.code == 2);
}

TEST_CASE("curvature check passes and fails on a tight tolerance") {
  const fs::path d = scratch("curvature");
  const Run ok = run({"curvature-check", "--out", d.string(), "--config",
                      write_config(d, "c.cfg", "samples = 2000\n").string()});
  CHECK(ok.code == 0);
  const csv::Table t = csv::read(d / "resonance_scan.csv");
  CHECK(t.rows.size() == 2000);
  require_columns(t, {"xi1", "xi2", "eta1", "eta2", "phi", "gamma", "theta", "identity_residual"});
  const Run fail = run({"curvature-check", "--out", d.string(), "--config",
                        write_config(d, "t.cfg", "samples = 2000\ntolerance = 1e-30\n").string()});
  CHECK(fail.code == 4);
  CHECK(fail.err.find("kind=convergence") != std::string::npos);
  CHECK(fs::exists(d / "resonance_scan.1.csv"));
}

TEST_CASE("null form orders from the cli") {
  const fs::path d = scratch("nullform");
  REQUIRE(run({"nullform-check", "--out", d.string()}).code == 0);
  const csv::Table t = csv::read(d / "nullform.csv");
  require_columns(t, {"symbol", "eps", "sup_value", "fitted_slope", "r2", "degenerate"});
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string& s = t.rows[i][t.column("symbol")];
    const double slope = t.number(i, "fitted_slope");
    if (s == "symmetrized") CHECK(slope == doctest::Approx(2.0).epsilon(0.025));
    if (s == "original") CHECK(slope == doctest::Approx(1.0).epsilon(0.05));
    if (s == "constant") CHECK(std::abs(slope) <= 0.02);
  }
}

TEST_CASE("run index never overwrites and the manifest is a reusable config") {
  const fs::path d = scratch("runs");
  const fs::path cfg = write_config(d, "sim.cfg", kSmallSim);
  REQUIRE(run({"run-sim", "--out", d.string(), "--config", cfg.string()}).code == 0);
  const std::string first = slurp(d / "diagnostics.csv");
  REQUIRE(run({"run-sim", "--out", d.string(), "--config", (d / "manifest.txt").string()}).code == 0);
  CHECK(slurp(d / "diagnostics.csv") == first);
  CHECK(slurp(d / "diagnostics.1.csv") == first);
  CHECK(fs::exists(d / "manifest.1.txt"));
  CHECK(fs::exists(d / "final.1.bpf"));
  const std::string m = slurp(d / "manifest.1.txt");
  CHECK(m.find("# run_index = 1") != std::string::npos);
  CHECK(m.find("# status = ok") != std::string::npos);
  const csv::Table t = csv::read(d / "diagnostics.csv");
  require_columns(t, {"t", "l2_omega", "l2_u", "h_n", "linf_omega", "linf_du", "x_norm_profile", "tail_mass", "cfl"});
}

TEST_CASE("outputs do not depend on the worker count") {
  const fs::path d = scratch("jobs");
  const fs::path cfg = write_config(d, "sim.cfg", kSmallSim);
  REQUIRE(run({"run-sim", "--out", (d / "one").string(), "--config", cfg.string(), "--jobs", "1"}).code == 0);
  REQUIRE(run({"run-sim", "--out", (d / "two").string(), "--config", cfg.string(), "--jobs", "3"}).code == 0);
  CHECK(slurp(d / "one" / "diagnostics.csv") == slurp(d / "two" / "diagnostics.csv"));
  CHECK(slurp(d / "one" / "final.bpf") == slurp(d / "two" / "final.bpf"));
}

TEST_CASE("zero amplitude gives constant diagnostics") {
  const fs::path d = scratch("zero");
  const fs::path cfg = write_config(d, "z.cfg", std::string(kSmallSim) + "amplitude = 0\n");
  // kSmallSim already sets amplitude; duplicate keys are rejected.
  CHECK(run({"run-sim", "--out", d.string(), "--config", cfg.string()}).code == 2);
  std::string text = kSmallSim;
  text.replace(text.find("amplitude = 0.05"), 16, "amplitude = 0");
  REQUIRE(run({"run-sim", "--out", d.string(), "--config", write_config(d, "z2.cfg", text).string()}).code == 0);
  const csv::Table t = csv::read(d / "diagnostics.csv");
  REQUIRE(t.rows.size() >= 2);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.number(i, "l2_omega") == 0.0);
    CHECK(t.number(i, "linf_omega") == 0.0);
  }
}

TEST_CASE("snapshot reload continues from the saved field") {
  const fs::path d = scratch("snapshot");
  REQUIRE(run({"run-sim", "--out", (d / "a").string(), "--config",
               write_config(d, "a.cfg", kSmallSim).string()}).code == 0);
  const std::string with_snap =
      std::string(kSmallSim) + "snapshot_in = " + (d / "a" / "final.bpf").string() + "\n";
  REQUIRE(run({"lp-report", "--out", (d / "b").string(), "--config",
               write_config(d, "b.cfg", with_snap).string()}).code == 0);
  const csv::Table atoms = csv::read(d / "b" / "lp_atoms.csv");
  require_columns(atoms, {"k", "j", "weighted_value"});
  CHECK(atoms.rows.size() > 0);
  const csv::Table sim = csv::read(d / "a" / "diagnostics.csv");
  const csv::Table sum = csv::read(d / "b" / "lp_summary.csv");
  CHECK(sum.number(0, "l2") == doctest::Approx(sim.number(sim.rows.size() - 1, "l2_omega")).epsilon(1e-10));
  std::string wrong = with_snap;
  wrong.replace(wrong.find("n = 32"), 6, "n = 64");
  CHECK(run({"lp-report", "--out", (d / "c").string(), "--config", write_config(d, "c.cfg", wrong).string()})
            .code == 3);
}

TEST_CASE("decay, ibp and schur csv schemas") {
  const fs::path d = scratch("schemas");
  REQUIRE(run({"decay-scan", "--out", (d / "decay").string(), "--config",
               write_config(d, "d.cfg", "n = 512\nl = 512\ntimes = 10, 20, 30\n").string()}).code == 0);
  const csv::Table decay = csv::read(d / "decay" / "decay.csv");
  require_columns(decay, {"k", "t", "sup_norm", "fitted_slope", "r2"});
  CHECK(decay.rows.size() == 3);

  REQUIRE(run({"ibp-probe", "--out", (d / "ibp").string(), "--config",
               write_config(d, "i.cfg", "amplitude = disc\nphase = quadratic\nK = 10, 100, 1000\n").string()})
              .code == 0);
  require_columns(csv::read(d / "ibp" / "ibp.csv"), {"K", "abs_integral", "fitted_slope"});

  REQUIRE(run({"schur-bench", "--out", (d / "schur").string(), "--config",
               write_config(d, "s.cfg", "tuples = 3\nlo = -1\nhi = 1\nladder_geometries = 0\n").string()})
              .code == 0);
  const csv::Table s = csv::read(d / "schur" / "schur_sweep.csv");
  require_columns(s, {"p", "ell", "r", "k", "a", "b", "empirical", "bound_shape", "ratio", "fitted_C"});
  CHECK(s.rows.size() == 3);
}
