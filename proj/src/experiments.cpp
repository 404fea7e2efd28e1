#include "resonance/experiments.hpp"

#include <chrono>
#include <cmath>
#include <future>

#include "resonance/asymptotics.hpp"
#include "resonance/errors.hpp"
#include "resonance/oracles.hpp"

#ifndef RESONANCE_VERSION
#define RESONANCE_VERSION "unknown"
#endif

namespace resonance {

const RunOutput* ExperimentResult::find(const std::string& name) const {
  for (const auto& [n, r] : runs)
    if (n == name) return &r;
  return nullptr;
}

SpectralAmplitude smooth_bump_amplitude(const PeriodicGrid& grid, double width) {
  if (!(width > 0.0)) throw InvalidInput("bump width must be positive");
  std::vector<Complex> z(grid.size());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = std::exp(-(1.0 - std::cos(grid.x(j) - kPi)) / (width * width));
  auto a = to_spectral(grid, z);
  a.coeffs[grid.size() / 2] = {};
  return a;
}

SpectralAmplitude amplitude_initial(const RunConfig& c, const PeriodicGrid& grid) {
  if (c.profile == "zero") return SpectralAmplitude(grid);
  if (c.profile == "two-harmonic") return two_harmonic_initial(grid);
  if (c.profile == "single-harmonic") return single_harmonic_initial(grid, c.harmonic, c.a0);
  if (c.profile == "bump") return smooth_bump_amplitude(grid, c.bump_width);
  if (c.profile == "pulse") return extract_amplitude(mrs_pulse_initial(grid, c.scaling.epsilon), c.scaling.epsilon, false);
  throw InvalidInput("unknown profile '" + c.profile + "'");
}

MrsState mrs_initial(const RunConfig& c, const PeriodicGrid& grid) {
  if (c.profile == "zero") return {RealField(grid), RealField(grid), 0.0};
  if (c.profile == "pulse") return mrs_pulse_initial(grid, c.scaling.epsilon);
  return reconstruct_mrs(amplitude_initial(c, grid), c.scaling.epsilon, 0.0, 1);
}

DiagnosticsTable envelope_difference(const RunOutput& mrs, const RunOutput& dqs, double epsilon) {
  DiagnosticsTable t;
  t.columns = {"t", "L2_diff", "Linf_diff"};
  const std::size_t count = std::min(mrs.mrs_snapshots.size(), dqs.dqs_snapshots.size());
  const double h = mrs.grid.spacing();
  for (std::size_t i = 0; i < count; ++i) {
    const auto& s = mrs.mrs_snapshots[i];
    const auto& a = dqs.dqs_snapshots[i].a;
    if (a.size() != s.u.size()) throw InvalidInput("MRS and DQS grids differ");
    double l2 = 0.0, linf = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double d = std::hypot(s.u[j], s.v[j]) - 2.0 * epsilon * std::abs(a[j]);
      l2 += d * d;
      linf = std::max(linf, std::abs(d));
    }
    t.add_row({s.time, std::sqrt(h * l2), linf});
  }
  return t;
}

std::vector<double> reconstruction_error(const RunOutput& mrs, const RunOutput& dqs, double epsilon) {
  const std::size_t count = std::min(mrs.mrs_snapshots.size(), dqs.dqs_snapshots.size());
  std::vector<double> err(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& s = mrs.mrs_snapshots[i];
    const auto& a = dqs.dqs_snapshots[i].a;
    if (a.size() != s.u.size()) throw InvalidInput("MRS and DQS grids differ");
    const Complex phase = epsilon * std::polar(1.0, -s.time);
    double e = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const Complex w = phase * a[j];
      e = std::max({e, std::abs(s.u[j] - 2.0 * w.real()), std::abs(s.v[j] - 2.0 * w.imag())});
    }
    err[i] = e;
  }
  return err;
}

namespace {

void describe(const RunConfig& c, Manifest& m) {
  m.set("experiment", to_string(c.experiment));
  m.set("code_version", RESONANCE_VERSION);
  m.set("seed", static_cast<long long>(c.seed));
  m.set("paper_scale", c.paper_scale);
  if (c.experiment != Experiment::Oracle) {
    m.set("profile", c.profile);
    m.set("epsilon", c.scaling.epsilon);
  }
}

void mark_failure(ExperimentResult& r, const std::exception& e) {
  r.error = std::current_exception();
  r.manifest.set("status", "failed");
  r.manifest.set("failure", e.what());
}

DiagnosticsTable oracle_table(const RunConfig& c) {
  const auto& o = c.oracle;
  DiagnosticsTable t;
  switch (o.kind) {
    case OracleConfig::Kind::Dispersion:
      t.columns = {"k", "omega0", "omega1", "omega2", "omega2_sawtooth_closed_form"};
      for (int k = o.k_min; k <= o.k_max; ++k) {
        if (k == 0) continue;
        const auto d = dispersion(o.kernel, k, o.branch, o.truncation, o.tail_correction);
        const double kd = k;
        t.add_row({kd, d.omega0, d.omega1, d.omega2, -1.0 / (2.0 * kd) - 0.5 * kPi * kPi * kd});
      }
      break;
    case OracleConfig::Kind::Harmonic: {
      t.columns = {"tau", "re_a", "im_a", "abs_a", "omega"};
      const double omega = single_harmonic_frequency(o.harmonic, o.a0, c.dqs.mu, c.dqs.nonlinear_coefficient);
      for (int i = 0; i < o.samples; ++i) {
        const double tau = o.samples == 1 ? o.tau_end : o.tau_end * i / (o.samples - 1);
        const Complex a = single_harmonic(o.harmonic, o.a0, c.dqs.mu, tau, c.dqs.nonlinear_coefficient);
        t.add_row({tau, a.real(), a.imag(), std::abs(a), omega});
      }
      break;
    }
    case OracleConfig::Kind::TravelingWave:
      t.columns = {"xi", "phi", "re_a", "im_a", "abs_a", "residual"};
      for (int i = 0; i < o.samples; ++i) {
        const double xi = o.samples == 1 ? o.xi_min : o.xi_min + (o.xi_max - o.xi_min) * i / (o.samples - 1);
        const auto p = traveling_wave(o.c, xi, o.newton_tol);
        t.add_row({xi, p.phi, p.a.real(), p.a.imag(), std::abs(p.a), p.residual});
      }
      break;
  }
  return t;
}

void run_oracle(const RunConfig& c, ExperimentResult& r) {
  const char* kinds[] = {"dispersion", "harmonic", "traveling-wave"};
  r.manifest.set("oracle", kinds[static_cast<int>(c.oracle.kind)]);
  if (c.oracle.kind == OracleConfig::Kind::Dispersion) {
    r.manifest.set("kernel", to_string(c.oracle.kernel.variant));
    r.manifest.set("branch", c.oracle.branch == Branch::Plus ? "plus" : "minus");
    r.manifest.set("truncation", static_cast<long long>(c.oracle.truncation));
    r.manifest.set("tail_correction", c.oracle.tail_correction);
  } else if (c.oracle.kind == OracleConfig::Kind::Harmonic) {
    r.manifest.set("harmonic", c.oracle.harmonic);
    r.manifest.set("mu", c.dqs.mu);
    r.manifest.set("nonlinear_coefficient", c.dqs.nonlinear_coefficient);
  } else {
    r.manifest.set("c", c.oracle.c);
    r.manifest.set("newton_tol", c.oracle.newton_tol);
  }
  r.oracle_table = oracle_table(c);
  r.manifest.set("status", "ok");
}

void run_single_mrs(const RunConfig& c, const PeriodicGrid& grid, ExperimentResult& r) {
  r.runs.emplace_back("mrs", RunOutput(FieldLayout::Mrs, grid));
  run_mrs_into(mrs_initial(c, grid), c.mrs, r.runs.back().second);
}

void run_single_dqs(const RunConfig& c, const PeriodicGrid& grid, bool mrs_amplitude, ExperimentResult& r) {
  r.runs.emplace_back("dqs", RunOutput(FieldLayout::Dqs, grid));
  const auto a0 = amplitude_initial(c, grid);
  if (mrs_amplitude) run_mrs_amplitude_into(a0, c.dqs, r.runs.back().second);
  else run_dqs_into(a0, c.dqs, r.runs.back().second);
}

void run_compare(const RunConfig& c, const PeriodicGrid& grid, ExperimentResult& r) {
  const double eps = c.scaling.epsilon;
  const MrsState u0 = mrs_initial(c, grid);
  const SpectralAmplitude a0 = extract_amplitude(u0, eps, false);

  DqsConfig dqs = c.dqs;
  dqs.tau_end = eps * eps * c.mrs.t_end;
  dqs.snapshot_taus.clear();
  for (double t : c.mrs.snapshot_times) dqs.snapshot_taus.push_back(std::min(eps * eps * t, dqs.tau_end));

  r.runs.emplace_back("mrs", RunOutput(FieldLayout::Mrs, grid));
  r.runs.emplace_back("dqs", RunOutput(FieldLayout::Dqs, grid));
  RunOutput& mrs_out = r.runs[0].second;
  RunOutput& dqs_out = r.runs[1].second;
  r.manifest.set("time_alignment", "tau = epsilon^2 * t");
  r.manifest.set("envelope_model", "(u^2+v^2)^(1/2) vs 2*epsilon*|a|");

  // The two halves are independent; each is internally sequential.
  auto mrs_task = std::async(std::launch::async, [&] { run_mrs_into(u0, c.mrs, mrs_out); });
  std::exception_ptr dqs_error;
  try {
    run_dqs_into(a0, dqs, dqs_out);
  } catch (...) {
    dqs_error = std::current_exception();
  }
  mrs_task.get();
  if (dqs_error) std::rethrow_exception(dqs_error);
  r.envelope_diff = envelope_difference(mrs_out, dqs_out, eps);
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& config) {
  ExperimentResult r;
  r.experiment = config.experiment;
  describe(config, r.manifest);
  const auto start = std::chrono::steady_clock::now();
  try {
    if (config.experiment == Experiment::Oracle) {
      run_oracle(config, r);
    } else {
      const PeriodicGrid grid(config.n);
      switch (config.experiment) {
        case Experiment::MrsFront: run_single_mrs(config, grid, r); break;
        case Experiment::DqsFront: run_single_dqs(config, grid, true, r); break;
        case Experiment::TwoHarmonic: run_single_dqs(config, grid, false, r); break;
        case Experiment::Compare: run_compare(config, grid, r); break;
        case Experiment::Custom:
          if (config.solver == "mrs") run_single_mrs(config, grid, r);
          else run_single_dqs(config, grid, config.solver == "mrs-amplitude", r);
          break;
        case Experiment::Oracle: break;
      }
      r.manifest.set("status", "ok");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    mark_failure(r, e);
  }
  if (config.record_wall_time)
    r.manifest.set("wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return r;
}

std::vector<std::filesystem::path> export_experiment(const ExperimentResult& r, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  if (r.oracle_table) {
    write_table_csv(*r.oracle_table, dir / "oracle.csv");
    write_manifest(r.manifest, dir / "manifest.txt");
    return {dir / "oracle.csv", dir / "manifest.txt"};
  }
  if (r.runs.size() == 1) {
    // Experiment-level keys first, then the solver's own record.
    RunOutput merged = r.runs.front().second;
    Manifest m = r.manifest;
    for (const auto& [k, v] : merged.manifest.entries())
      if (!(k == "status" && m.contains("status"))) m.set(k, v);
    merged.manifest = m;
    return export_snapshots(merged, dir);
  }
  for (const auto& [name, run] : r.runs) {
    auto files = export_snapshots(run, dir / name);
    written.insert(written.end(), files.begin(), files.end());
  }
  if (r.envelope_diff) {
    write_table_csv(*r.envelope_diff, dir / "envelope_diff.csv");
    written.push_back(dir / "envelope_diff.csv");
  }
  write_manifest(r.manifest, dir / "manifest.txt");
  written.push_back(dir / "manifest.txt");
  return written;
}

ExperimentResult run_and_export(const RunConfig& config, const std::filesystem::path& dir) {
  auto r = run_experiment(config);
  export_experiment(r, dir);
  if (r.error) std::rethrow_exception(r.error);
  return r;
}

}  // namespace resonance
