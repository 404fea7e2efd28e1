#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <utility>
#include <random>

#include "helpers.hpp"
#include "resonance/errors.hpp"
#include "resonance/mrs.hpp"

using namespace resonance;
using test::max_diff;

namespace {

MrsState smooth_state(const PeriodicGrid& g, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  return {RealField(g, test::smooth_random(g, rng, 4, scale)), RealField(g, test::smooth_random(g, rng, 4, scale)),
          0.0};
}

MrsState evolve(MrsState s, const KernelSpec& k, double t_end, const MrsTerms& terms = {}) {
  while (s.time < t_end - 1e-12) {
    const double dt = std::min(stable_time_step(s, 0.5, 0.05), t_end - s.time);
    s = rk4_step(s, k, dt, terms);
  }
  return s;
}

}  // namespace

TEST_CASE("rest state has zero tendency") {
  const PeriodicGrid g(32);
  const auto [du, dv] = mrs_rhs({RealField(g), RealField(g), 0.0}, KernelSpec::sawtooth_k());
  CHECK(test::max_abs(du.values) == 0.0);
  CHECK(test::max_abs(dv.values) == 0.0);
  const auto next = rk4_step({RealField(g), RealField(g), 0.0}, KernelSpec::sawtooth_k(), 0.1);
  CHECK(test::max_abs(next.u.values) == 0.0);
  CHECK(next.time == doctest::Approx(0.1));
}

TEST_CASE("linearized tendency of eps cos x") {
  const PeriodicGrid g(64);
  const double eps = 1e-3;
  MrsState s{RealField(g), RealField(g), 0.0};
  for (std::size_t j = 0; j < g.size(); ++j) s.u.values[j] = eps * std::cos(g.x(j));
  const auto [du, dv] = mrs_rhs(s, KernelSpec::sawtooth_k());
  std::vector<double> expect(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) expect[j] = -eps * std::cos(g.x(j));
  CHECK(test::max_abs(du.values) < 2 * eps * eps);  // only the O(ε²) flux remains
  CHECK(max_diff(dv.values, expect) < 1e-15);
}

TEST_CASE("sawtooth K source is the local rotation") {
  const auto s = smooth_state(PeriodicGrid(64), 1, 1.0);
  const auto [su, sv] = mrs_source(s, KernelSpec::sawtooth_k());
  CHECK(max_diff(su.values, s.v.values) == 0.0);
  for (std::size_t j = 0; j < su.values.size(); ++j) CHECK(sv.values[j] == -s.u.values[j]);
}

TEST_CASE("custom kernel source matches quadrature of the nonlocal integrals") {
  const PeriodicGrid g(256);
  const std::map<int, Complex> kc = {{1, {0.3, 0.8}}, {-1, {0.3, -0.8}}, {2, {-0.2, 0.1}}, {-2, {-0.2, -0.1}},
                                     {3, {0.0, 0.4}}, {-3, {0.0, -0.4}}};
  const auto spec = KernelSpec::custom(kc);
  auto kernel = [&](double x) {
    Complex s{};
    for (const auto& [k, c] : kc) s += c * std::polar(1.0, k * x);
    return s.real();
  };
  MrsState s{RealField(g), RealField(g), 0.0};
  auto v_prime = [](double y) { return std::cos(y) - 1.5 * std::sin(2 * y) + 0.6 * std::cos(3 * y); };
  auto u_prime = [](double y) { return -2.0 * std::sin(2 * y) + 0.9 * std::cos(y); };
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    s.v.values[j] = std::sin(x) + 0.75 * std::cos(2 * x) + 0.2 * std::sin(3 * x);
    s.u.values[j] = std::cos(2 * x) + 0.9 * std::sin(x);
  }
  const auto [su, sv] = mrs_source(s, spec);
  const std::size_t m = 10 * g.size();
  const double h = kTwoPi / static_cast<double>(m);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double qu = 0.0, qv = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double y = static_cast<double>(j) * h;
      qu += kernel(g.x(i) - y) * v_prime(y);
      qv += kernel(y - g.x(i)) * u_prime(y);
    }
    err = std::max({err, std::abs(su.values[i] - qu * h / kTwoPi), std::abs(sv.values[i] - qv * h / kTwoPi)});
  }
  CHECK(err < 1e-8);
}

TEST_CASE("rk4 rejects non-positive steps") {
  const auto s = smooth_state(PeriodicGrid(16), 2, 1.0);
  CHECK_THROWS_AS(rk4_step(s, KernelSpec::sawtooth_k(), 0.0), InvalidInput);
  CHECK_THROWS_AS(rk4_step(s, KernelSpec::sawtooth_k(), -0.1), InvalidInput);
}

TEST_CASE("linear rotation is integrated with fifth-order local error") {
  const PeriodicGrid g(32);
  const auto s0 = smooth_state(g, 3, 1.0);
  MrsTerms linear{false, true, true};
  auto error = [&](double dt) {
    const auto s = rk4_step(s0, KernelSpec::sawtooth_k(), dt, linear);
    double e = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double u = s0.u.values[j] * std::cos(dt) + s0.v.values[j] * std::sin(dt);
      const double v = -s0.u.values[j] * std::sin(dt) + s0.v.values[j] * std::cos(dt);
      e = std::max({e, std::abs(s.u.values[j] - u), std::abs(s.v.values[j] - v)});
    }
    return e;
  };
  const double e1 = error(0.2), e2 = error(0.1);
  INFO(e1 << " " << e2);
  CHECK(e1 / e2 > 28.0);
  CHECK(e1 / e2 < 36.0);
}

TEST_CASE("energy is conserved before shocks") {
  const PeriodicGrid g(256);
  const auto s0 = smooth_state(g, 4, 1e-3);
  const auto s = evolve(s0, KernelSpec::sawtooth_k(), 20.0);
  CHECK(std::abs(mrs_energy(s) - mrs_energy(s0)) < 1e-6 * mrs_energy(s0));
}

TEST_CASE("zero-mean data stay zero-mean") {
  const PeriodicGrid g(128);
  const auto s = evolve(smooth_state(g, 5, 0.1), KernelSpec::sawtooth_k(), 10.0);
  CHECK(std::abs(s.u.mean()) < 1e-10);
  CHECK(std::abs(s.v.mean()) < 1e-10);
}

TEST_CASE("means rotate with the source when data have nonzero mean") {
  const PeriodicGrid g(128);
  MrsState s = mrs_pulse_initial(g, 0.01);
  const double m0 = s.u.mean();
  MrsConfig cfg;
  cfg.t_end = 2.0;
  cfg.dt_cap = 0.01;
  cfg.snapshot_times = {2.0};
  const auto out = run_mrs(s, cfg);
  CHECK(out.manifest.get("mean_projection") == "false");
  std::vector<double> u = out.mrs_snapshots.back().u, v = out.mrs_snapshots.back().v;
  const double mu = RealField(g, u).mean(), mv = RealField(g, v).mean();
  CHECK(mu == doctest::Approx(m0 * std::cos(2.0)).epsilon(1e-9));
  CHECK(mv == doctest::Approx(-m0 * std::sin(2.0)).epsilon(1e-9));
}

TEST_CASE("reflection symmetries") {
  const PeriodicGrid g(256);
  const auto s0 = smooth_state(g, 6, 0.2);
  auto reflect = [](const MrsState& s) {
    MrsState r = mirror_symmetry(s);
    std::swap(r.u, r.v);
    return r;
  };
  // x - π -> -(x - π) with u -> -u, v -> -v commutes with the evolution.
  const auto a = reflect(evolve(s0, KernelSpec::sawtooth_k(), 3.0));
  const auto b = evolve(reflect(s0), KernelSpec::sawtooth_k(), 3.0);
  CHECK(max_diff(a.u.values, b.u.values) < 1e-8);
  CHECK(max_diff(a.v.values, b.v.values) < 1e-8);

  // With the exchange u -> -v, v -> -u the source changes sign: the image solves the
  // system with sources (-v, u), which is the nonlocal form with the K coefficients.
  std::map<int, Complex> reversed;
  for (int k = -g.nyquist() + 1; k < g.nyquist(); ++k)
    if (k != 0) reversed[k] = KernelSpec::sawtooth_k().coefficient(k);
  const auto w0 = smooth_state(g, 6, 0.02);
  const auto c = mirror_symmetry(evolve(w0, KernelSpec::sawtooth_k(), 3.0));
  const auto d = evolve(mirror_symmetry(w0), KernelSpec::custom(reversed), 3.0);
  CHECK(max_diff(c.u.values, d.u.values) < 1e-8);
  CHECK(max_diff(c.v.values, d.v.values) < 1e-8);
  const auto e = evolve(mirror_symmetry(w0), KernelSpec::sawtooth_k(), 3.0);
  CHECK(max_diff(c.u.values, e.u.values) > 1e-3);
}

TEST_CASE("shock indicator") {
  const PeriodicGrid g(256);
  const auto s = smooth_state(g, 7, 1.0);
  CHECK(shock_indicator(s.u) < 0.2);
  RealField step(g);
  for (std::size_t j = 0; j < 128; ++j) step.values[j] = 1.0;
  CHECK(shock_indicator(step) == doctest::Approx(1.0));
  CHECK(shock_indicator(RealField(g)) == 0.0);
}

TEST_CASE("front positions of a pulse") {
  const PeriodicGrid g(1024);
  const auto s = mrs_pulse_initial(g, 0.01);
  const auto f = envelope_fronts(mrs_envelope(s), g, 0.01);
  REQUIRE(f.found);
  CHECK(std::abs(f.left - kPi / 2) < 0.2);
  CHECK(std::abs(f.right - 3 * kPi / 2) < 0.2);
  CHECK(default_front_epsilon() == doctest::Approx(0.005463).epsilon(1e-4));
}

TEST_CASE("run_mrs stores snapshots and a manifest") {
  const PeriodicGrid g(64);
  MrsConfig cfg;
  cfg.t_end = 1.0;
  cfg.snapshot_times = {0.0, 0.5, 1.0};
  const auto out = run_mrs(smooth_state(g, 8, 0.1), cfg);
  REQUIRE(out.snapshot_count() == 3);
  CHECK(out.snapshot_times() == std::vector<double>{0.0, 0.5, 1.0});
  for (const char* key : {"n", "cfl", "scheme_space", "scheme_time", "kernel", "dt_policy", "status"})
    CHECK(out.manifest.contains(key));
  CHECK(out.manifest.get("status") == "ok");
  CHECK(out.diagnostics.size() >= 3);

  MrsConfig bad = cfg;
  bad.cfl = 1.5;
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("cfl out of range"), InvalidInput);
}

TEST_CASE("divergence is reported with its time") {
  const PeriodicGrid g(32);
  MrsState s{RealField(g), RealField(g), 0.0};
  for (std::size_t j = 0; j < g.size(); ++j) {
    s.u.values[j] = 1e-3 * std::cos(g.x(j));
    s.v.values[j] = 1e-3 * std::cos(2 * g.x(j));
  }
  // max|u| grows to about √2 of the initial scale as the source rotates the pair.
  MrsConfig cfg;
  cfg.t_end = 1.0;
  cfg.divergence_factor = 1.2;
  RunOutput out(FieldLayout::Mrs, g);
  try {
    run_mrs_into(s, cfg, out);
    FAIL("expected divergence");
  } catch (const SolverDiverged& e) {
    CHECK(e.time() > 0.1);
    CHECK(e.time() < 0.785);
    CHECK(out.manifest.get("status") == "failed");
  }
  s.u.values[3] = std::numeric_limits<double>::quiet_NaN();
  RunOutput bad(FieldLayout::Mrs, g);
  CHECK_THROWS_AS(run_mrs_into(s, MrsConfig{}, bad), SolverDiverged);
}
