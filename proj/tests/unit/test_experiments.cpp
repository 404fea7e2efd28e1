#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "resonance/errors.hpp"
#include "resonance/experiments.hpp"

using namespace resonance;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("resonance_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("single snapshot export writes three files") {
  const auto c = parse_config("experiment = custom\nn = 32\nsolver = dqs\nprofile = zero\nsnapshots = 1\ntau_end = 0.01\n");
  const auto dir = scratch("single");
  const auto files = export_experiment(run_experiment(c), dir);
  CHECK(files.size() == 3);
  std::size_t count = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++count;
  CHECK(count == 3);
  CHECK(fs::exists(dir / "manifest.txt"));
  CHECK(fs::exists(dir / "diagnostics.csv"));
}

TEST_CASE("zero data stay zero") {
  const auto c = parse_config("experiment = custom\nn = 64\nsolver = mrs\nprofile = zero\nsnapshots = 3\nt_end = 1\n");
  const auto r = run_experiment(c);
  REQUIRE(r.ok());
  const auto* out = r.find("mrs");
  REQUIRE(out);
  for (const auto& s : out->mrs_snapshots) {
    for (double x : s.u) CHECK(x == 0.0);
    for (double x : s.v) CHECK(x == 0.0);
  }
  const auto e = out->diagnostics.column("energy");
  for (double x : e) CHECK(x == 0.0);
}

TEST_CASE("snapshots round-trip bit-exactly and runs are deterministic") {
  const char* text =
      "experiment = two-harmonic\nn = 32\ndt = 1e-3\ntau_end = 0.02\nsnapshots = 3\n";
  const auto c = parse_config(text);
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  const auto r = run_experiment(c);
  const auto files = export_experiment(r, d1);
  export_experiment(run_experiment(c), d2);
  for (const auto& f : files) CHECK(slurp(f) == slurp(d2 / f.filename()));

  const auto& snap = r.runs.front().second.dqs_snapshots.back();
  const auto back = read_snapshot(d1 / "snapshot_0002.csv");
  CHECK(back.time == snap.time);
  REQUIRE(back.data.size() >= 3);
  for (std::size_t j = 0; j < snap.a.size(); ++j) {
    CHECK(back.data[1][j] == snap.a[j].real());
    CHECK(back.data[2][j] == snap.a[j].imag());
  }
}

TEST_CASE("manifest records the run") {
  const auto c = parse_config("experiment = two-harmonic\nn = 32\ndt = 1e-3\ntau_end = 0.01\nsnapshots = 2\nseed = 7\n");
  const auto dir = scratch("manifest");
  export_experiment(run_experiment(c), dir);
  const auto m = slurp(dir / "manifest.txt");
  for (const char* key : {"experiment", "code_version", "seed", "solver", "n", "mu", "dt", "status", "scheme_time"})
    CHECK_MESSAGE(m.find(std::string(key) + " = ") != std::string::npos, key);
  CHECK(m.find("seed = 7") != std::string::npos);
  CHECK(m.find("wall_time_s") == std::string::npos);
}

TEST_CASE("compare writes the envelope difference") {
  const auto c = parse_config("experiment = compare\nn = 128\nepsilon = 0.05\nt_end = 4\nsnapshots = 3\ndt = 1e-3\n");
  const auto dir = scratch("compare");
  const auto r = run_experiment(c);
  REQUIRE(r.ok());
  export_experiment(r, dir);
  const auto t = read_table_csv(dir / "envelope_diff.csv");
  CHECK(t.columns == std::vector<std::string>{"t", "L2_diff", "Linf_diff"});
  CHECK(t.size() == 3);
  CHECK(t.rows.front()[2] < 1e-12);
  CHECK(t.rows.back()[2] < 0.05);
  CHECK(fs::exists(dir / "mrs" / "manifest.txt"));
  CHECK(fs::exists(dir / "dqs" / "manifest.txt"));
}

TEST_CASE("solver failure is recorded") {
  const auto c = parse_config(
      "experiment = custom\nn = 64\nsolver = dqs\nprofile = single-harmonic\nharmonic = 8\na0_re = 5\n"
      "dt = 0.5\ntau_end = 1\npicard_max_iters = 2\nanderson_depth = 0\nmax_dt_halvings = 0\n");
  const auto dir = scratch("failure");
  const auto r = run_experiment(c);
  CHECK_FALSE(r.ok());
  CHECK(r.manifest.get("status") == "failed");
  CHECK(r.manifest.contains("failure"));
  CHECK_THROWS_AS(run_and_export(c, dir), StepFailure);
  CHECK(slurp(dir / "manifest.txt").find("status = failed") != std::string::npos);
}

TEST_CASE("oracle experiment") {
  const auto c = parse_config("experiment = oracle\noracle = dispersion\nk_min = 1\nk_max = 3\ntruncation = 2000\n");
  const auto r = run_experiment(c);
  REQUIRE(r.oracle_table);
  CHECK(r.oracle_table->size() == 3);
  for (const auto& row : r.oracle_table->rows) {
    CHECK(row[2] == doctest::Approx(1.0));
    CHECK(row[3] == doctest::Approx(row[4]).epsilon(1e-4));
  }
  const auto dir = scratch("oracle");
  CHECK(export_experiment(r, dir).size() == 2);
}
