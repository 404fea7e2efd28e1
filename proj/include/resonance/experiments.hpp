#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "resonance/config.hpp"
#include "resonance/run_output.hpp"

namespace resonance {

/// Everything one experiment produced. Solver failures do not throw out of
/// run_experiment: the partial trajectories are kept, the manifest is marked failed and
/// the exception is stored in `error`.
struct ExperimentResult {
  Experiment experiment = Experiment::Custom;
  Manifest manifest;
  /// Named solver runs ("mrs", "dqs"); a single entry for single-solver experiments.
  std::vector<std::pair<std::string, RunOutput>> runs;
  /// compare only: t, L2_diff, Linf_diff of (u²+v²)^{1/2} against 2ε|a|.
  std::optional<DiagnosticsTable> envelope_diff;
  /// oracle only.
  std::optional<DiagnosticsTable> oracle_table;
  std::exception_ptr error;

  bool ok() const { return !error; }
  const RunOutput* find(const std::string& name) const;
};

/// a(z) = exp(-(1 - cos(z - π))/w²): smooth, positive, peaked at π.
SpectralAmplitude smooth_bump_amplitude(const PeriodicGrid& grid, double width);

/// Initial MRS state for a profile name (zero, pulse, bump, two-harmonic, single-harmonic).
MrsState mrs_initial(const RunConfig& config, const PeriodicGrid& grid);
/// Initial amplitude for a profile name; the pulse is demodulated at t = 0 keeping its mean.
SpectralAmplitude amplitude_initial(const RunConfig& config, const PeriodicGrid& grid);

/// Per-snapshot envelope difference between an MRS run and the DQS run of its amplitude
/// (snapshots paired by index, DQS times being ε² times the MRS times).
DiagnosticsTable envelope_difference(const RunOutput& mrs, const RunOutput& dqs, double epsilon);

/// Max-norm of (u, v) minus the order-one reconstruction from the DQS snapshot, per snapshot pair.
std::vector<double> reconstruction_error(const RunOutput& mrs, const RunOutput& dqs, double epsilon);

ExperimentResult run_experiment(const RunConfig& config);

/// Single-solver runs are written flat into dir (snapshots, diagnostics.csv,
/// manifest.txt). Compare runs get mrs/ and dqs/ subdirectories plus envelope_diff.csv
/// and manifest.txt; oracle runs write oracle.csv and manifest.txt.
std::vector<std::filesystem::path> export_experiment(const ExperimentResult& result, const std::filesystem::path& dir);

/// Runs, exports (also after a solver failure) and rethrows any stored solver error.
ExperimentResult run_and_export(const RunConfig& config, const std::filesystem::path& dir);

}  // namespace resonance
