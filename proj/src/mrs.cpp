#include "resonance/mrs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "resonance/errors.hpp"
#include "resonance/weno.hpp"

namespace resonance {
namespace {

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void subtract_mean(RealField& f) {
  const double m = f.mean();
  for (double& x : f.values) x -= m;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void MrsConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidInput("cfl out of range (0, 1]");
  if (!(t_end > 0.0)) throw InvalidInput("t_end must be positive");
  if (reconstruction_order != 5) throw InvalidInput("only reconstruction_order = 5 (WENO5) is available");
  if (!(dt_cap > 0.0)) throw InvalidInput("dt_cap must be positive");
  if (diagnostic_interval < 0.0) throw InvalidInput("diagnostic_interval must be non-negative");
  if (shock_persistence < 1) throw InvalidInput("shock_persistence must be >= 1");
  if (!(divergence_factor > 1.0)) throw InvalidInput("divergence_factor must exceed 1");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw InvalidInput("snapshot_times must be sorted");
  for (double t : snapshot_times)
    if (t < 0.0 || t > t_end * (1 + 1e-12)) throw InvalidInput("snapshot time outside [0, t_end]");
}

std::pair<RealField, RealField> mrs_source(const MrsState& state, const KernelSpec& kernel) {
  if (kernel.variant == KernelSpec::Variant::SawtoothK) {
    RealField su = state.v;
    RealField sv = state.u;
    for (double& x : sv.values) x = -x;
    return {std::move(su), std::move(sv)};
  }
  return {kernel_convolve(kernel, state.v, false), kernel_convolve(kernel, state.u, true)};
}

std::pair<RealField, RealField> mrs_rhs(const MrsState& state, const KernelSpec& kernel, const MrsTerms& terms) {
  RealField du(state.u.grid), dv(state.v.grid);
  if (terms.flux) {
    auto fu = burgers_flux_divergence(state.u);
    auto fv = burgers_flux_divergence(state.v);
    axpy(du.values, -1.0, fu.values);
    axpy(dv.values, -1.0, fv.values);
  }
  if (terms.source) {
    auto [su, sv] = mrs_source(state, kernel);
    axpy(du.values, 1.0, su.values);
    axpy(dv.values, 1.0, sv.values);
  }
  return {std::move(du), std::move(dv)};
}

MrsState rk4_step(const MrsState& s, const KernelSpec& kernel, double dt, const MrsTerms& terms) {
  if (!(dt > 0.0)) throw InvalidInput("time step must be positive");
  auto stage = [&](const MrsState& base, double c, const std::pair<RealField, RealField>& k) {
    MrsState out = base;
    axpy(out.u.values, c, k.first.values);
    axpy(out.v.values, c, k.second.values);
    return out;
  };
  const auto k1 = mrs_rhs(s, kernel, terms);
  const auto k2 = mrs_rhs(stage(s, 0.5 * dt, k1), kernel, terms);
  const auto k3 = mrs_rhs(stage(s, 0.5 * dt, k2), kernel, terms);
  const auto k4 = mrs_rhs(stage(s, dt, k3), kernel, terms);

  MrsState next = s;
  const double w1 = dt / 6.0, w2 = dt / 3.0;
  for (std::size_t i = 0; i < next.u.values.size(); ++i) {
    next.u.values[i] += w1 * (k1.first.values[i] + k4.first.values[i]) + w2 * (k2.first.values[i] + k3.first.values[i]);
    next.v.values[i] +=
        w1 * (k1.second.values[i] + k4.second.values[i]) + w2 * (k2.second.values[i] + k3.second.values[i]);
  }
  if (terms.project_mean) {
    subtract_mean(next.u);
    subtract_mean(next.v);
  }
  next.time = s.time + dt;
  return next;
}

double stable_time_step(const MrsState& s, double cfl, double cap) {
  const double speed = std::max({max_abs(s.u.values), max_abs(s.v.values), 1e-8});
  return std::min(cfl * s.u.grid.spacing() / speed, cap);
}

double mrs_energy(const MrsState& s) {
  double e = 0.0;
  for (std::size_t i = 0; i < s.u.values.size(); ++i) e += s.u.values[i] * s.u.values[i] + s.v.values[i] * s.v.values[i];
  return e * s.u.grid.spacing();
}

double shock_indicator(const RealField& w) {
  const auto& v = w.values;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  if (range <= 0.0) return 0.0;
  double jump = std::abs(v.front() - v.back());
  for (std::size_t i = 0; i + 1 < v.size(); ++i) jump = std::max(jump, std::abs(v[i + 1] - v[i]));
  return jump / range;
}

FrontPositions envelope_fronts(const std::vector<double>& env, const PeriodicGrid& grid, double fraction) {
  FrontPositions f;
  const double peak = env.empty() ? 0.0 : *std::max_element(env.begin(), env.end());
  if (peak <= 0.0) return f;
  const double level = fraction * peak;
  std::size_t first = env.size(), last = 0;
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (env[i] >= level) {
      first = std::min(first, i);
      last = i;
    }
  }
  f.left = grid.x(first);
  f.right = grid.x(last);
  f.found = true;
  return f;
}

std::vector<double> mrs_envelope(const MrsState& s) {
  std::vector<double> e(s.u.values.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::hypot(s.u.values[i], s.v.values[i]);
  return e;
}

MrsState mirror_symmetry(const MrsState& s) {
  const std::size_t n = s.u.values.size();
  MrsState out{RealField(s.u.grid), RealField(s.v.grid), s.time};
  // x_j -> 2π - x_j maps slot j to slot (n - j) mod n.
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t m = (n - j) % n;
    out.u.values[j] = -s.v.values[m];
    out.v.values[j] = -s.u.values[m];
  }
  return out;
}

MrsState mrs_pulse_initial(const PeriodicGrid& grid, double epsilon) {
  MrsState s{RealField(grid), RealField(grid), 0.0};
  const double q = kPi * kPi / 4.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double d = grid.x(j) - kPi;
    if (std::abs(d) < kPi / 2) {
      const double b = q - d * d;
      s.u.values[j] = epsilon * b * b;
    }
  }
  return s;
}

double default_front_epsilon() { return std::sqrt(0.15 / (800.0 * kTwoPi)); }

namespace {

struct PersistentFlag {
  int needed = 3;
  int run = 0;
  double run_start = 0.0;
  double fired_at = std::numeric_limits<double>::quiet_NaN();

  void observe(bool on, double t) {
    if (!std::isnan(fired_at)) return;
    if (!on) {
      run = 0;
      return;
    }
    if (run == 0) run_start = t;
    if (++run >= needed) fired_at = run_start;
  }
  bool fired() const { return !std::isnan(fired_at); }
};

}  // namespace

void run_mrs_into(const MrsState& initial, const MrsConfig& config, RunOutput& out) {
  config.validate();
  if (!(initial.u.grid == initial.v.grid)) throw InvalidInput("u and v must share a grid");
  const auto& grid = initial.u.grid;

  // Zero-mean data stay zero-mean, so round-off drift is projected out. Otherwise the
  // means evolve under the source and are left alone.
  MrsTerms terms = config.terms;
  const double scale_in = std::max(max_abs(initial.u.values), max_abs(initial.v.values));
  if (std::abs(initial.u.mean()) > 1e-12 * std::max(scale_in, 1e-300) ||
      std::abs(initial.v.mean()) > 1e-12 * std::max(scale_in, 1e-300))
    terms.project_mean = false;

  auto& m = out.manifest;
  m.set("solver", "mrs");
  m.set("scheme_space", "finite-difference WENO5-JS, global Lax-Friedrichs flux splitting");
  m.set("scheme_time", "classical RK4");
  m.set("n", grid.size());
  m.set("cfl", config.cfl);
  m.set("dt_policy", "min(cfl*h/max(|u|,|v|,1e-8), dt_cap), clipped to output times");
  m.set("dt_cap", config.dt_cap);
  m.set("kernel", to_string(config.kernel.variant));
  m.set("t_end", config.t_end);
  m.set("mean_projection", terms.project_mean);
  m.set("flux_terms", terms.flux);
  m.set("source_terms", terms.source);
  m.set("diagnostic_interval", config.diagnostic_interval);
  m.set("shock_detector", "max|du| > threshold*range on consecutive samples");
  m.set("shock_threshold", config.shock_threshold);
  m.set("shock_persistence", config.shock_persistence);
  m.set("front_fraction", config.front_fraction);
  m.set("front_expansion_shift", config.front_expansion_shift);
  m.set("status", "running");

  out.diagnostics.columns = {"t",           "energy",       "mean_u",     "mean_v",     "max_abs",
                             "shock_ind_u", "shock_ind_v", "left_front", "right_front"};

  // Output events: snapshots plus the diagnostic cadence, and t_end.
  std::vector<double> events = config.snapshot_times;
  if (config.diagnostic_interval > 0.0) {
    const auto count = static_cast<long long>(std::floor(config.t_end / config.diagnostic_interval + 1e-9));
    for (long long k = 0; k <= count; ++k) events.push_back(static_cast<double>(k) * config.diagnostic_interval);
  }
  events.push_back(config.t_end);
  std::sort(events.begin(), events.end());
  const double tie = 1e-12 * std::max(1.0, config.t_end);
  events.erase(std::unique(events.begin(), events.end(), [&](double a, double b) { return std::abs(a - b) <= tie; }),
               events.end());

  MrsState state = initial;
  state.time = 0.0;
  if (terms.project_mean) {
    subtract_mean(state.u);
    subtract_mean(state.v);
  }

  const double scale0 = std::max(max_abs(state.u.values), max_abs(state.v.values));
  const FrontPositions front0 = envelope_fronts(mrs_envelope(state), grid, config.front_fraction);

  PersistentFlag shock_u{config.shock_persistence}, shock_v{config.shock_persistence};
  PersistentFlag grow_left{config.shock_persistence}, grow_right{config.shock_persistence};

  std::size_t next_snapshot = 0;
  auto record = [&](double t) {
    const auto env = mrs_envelope(state);
    const auto fronts = envelope_fronts(env, grid, config.front_fraction);
    const double iu = shock_indicator(state.u), iv = shock_indicator(state.v);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.diagnostics.add_row({t, mrs_energy(state), state.u.mean(), state.v.mean(),
                             std::max(max_abs(state.u.values), max_abs(state.v.values)), iu, iv,
                             fronts.found ? fronts.left : nan, fronts.found ? fronts.right : nan});
    shock_u.observe(iu > config.shock_threshold, t);
    shock_v.observe(iv > config.shock_threshold, t);
    if (front0.found && fronts.found) {
      grow_left.observe(fronts.left < front0.left - config.front_expansion_shift, t);
      grow_right.observe(fronts.right > front0.right + config.front_expansion_shift, t);
    }
    while (next_snapshot < config.snapshot_times.size() && std::abs(config.snapshot_times[next_snapshot] - t) <= tie) {
      out.mrs_snapshots.push_back({t, state.u.values, state.v.values});
      ++next_snapshot;
    }
  };

  auto finish = [&] {
    auto put = [&](const char* key, const PersistentFlag& f) {
      if (f.fired()) m.set(key, f.fired_at);
      else m.set(key, "none");
    };
    put("first_shock_time_u", shock_u);
    put("first_shock_time_v", shock_v);
    put("front_expansion_time_left", grow_left);
    put("front_expansion_time_right", grow_right);
    m.set("final_time", state.time);
  };

  long long steps = 0;
  auto fail = [&] {
    m.set("status", "failed");
    m.set("failure", "solver diverged");
    m.set("steps", steps);
    finish();
    throw SolverDiverged("MRS solver diverged", state.time);
  };
  for (double te : events) {
    while (state.time < te - tie) {
      double dt = stable_time_step(state, config.cfl, config.dt_cap);
      if (!(dt > 0.0)) fail();
      if (state.time + dt > te - tie) dt = te - state.time;
      state = rk4_step(state, config.kernel, dt, terms);
      ++steps;
      const double peak = std::max(max_abs(state.u.values), max_abs(state.v.values));
      if (!all_finite(state.u.values) || !all_finite(state.v.values) ||
          (scale0 > 0.0 && peak > config.divergence_factor * scale0))
        fail();
    }
    state.time = te;
    record(te);
  }
  m.set("steps", steps);
  m.set("status", "ok");
  finish();
}

RunOutput run_mrs(const MrsState& initial, const MrsConfig& config) {
  RunOutput out(FieldLayout::Mrs, initial.u.grid);
  run_mrs_into(initial, config, out);
  return out;
}

}  // namespace resonance
