#pragma once

#include <utility>
#include <vector>

#include "resonance/grid.hpp"
#include "resonance/run_output.hpp"
#include "resonance/spectral.hpp"

namespace resonance {

/// Paired fields of u_t + (½u²)_x = P[v], v_t + (½v²)_x = Q[u].
struct MrsState {
  RealField u;
  RealField v;
  double time = 0.0;
};

/// Switches for the pieces of the right-hand side. Tests use these to isolate the
/// Burgers flux or the linear source rotation.
struct MrsTerms {
  bool flux = true;
  bool source = true;
  bool project_mean = true;
};

struct MrsConfig {
  KernelSpec kernel = KernelSpec::sawtooth_k();
  double cfl = 0.5;
  double t_end = 1.0;
  /// Sorted times in [0, t_end] at which full snapshots are stored.
  std::vector<double> snapshot_times;
  /// Only the fifth-order WENO-JS reconstruction is implemented.
  int reconstruction_order = 5;
  double dt_cap = 0.05;
  /// Spacing of diagnostic samples between snapshots; 0 samples at snapshots only.
  double diagnostic_interval = 0.0;
  /// Shock flag: max_i |u_{i+1} - u_i| > shock_threshold * (max u - min u) ...
  double shock_threshold = 0.02;
  /// ... on this many consecutive diagnostic samples.
  int shock_persistence = 3;
  /// Envelope level (fraction of its max) that defines the front positions.
  double front_fraction = 0.01;
  /// Outward displacement of a front beyond its initial position that counts as expansion.
  double front_expansion_shift = 0.05;
  /// Divergence guard: max|u|,|v| above this multiple of the initial scale aborts.
  double divergence_factor = 1e3;
  MrsTerms terms;

  /// Throws InvalidInput when a parameter is out of range.
  void validate() const;
};

/// Source terms only: (+v, -u) for the sawtooth K, kernel convolutions otherwise.
std::pair<RealField, RealField> mrs_source(const MrsState& state, const KernelSpec& kernel);

/// Tendencies (du/dt, dv/dt).
std::pair<RealField, RealField> mrs_rhs(const MrsState& state, const KernelSpec& kernel, const MrsTerms& terms = {});

/// Classical fourth-order Runge–Kutta step; throws InvalidInput for dt <= 0.
MrsState rk4_step(const MrsState& state, const KernelSpec& kernel, double dt, const MrsTerms& terms = {});

/// min(cfl·h / max(|u|,|v|,1e-8), cap).
double stable_time_step(const MrsState& state, double cfl, double cap);

/// ∫(u² + v²) dx by the trapezoidal rule.
double mrs_energy(const MrsState& state);

/// max_i |w_{i+1} - w_i| / (max w - min w); 0 for constant data.
double shock_indicator(const RealField& w);

struct FrontPositions {
  double left = 0.0;
  double right = 0.0;
  bool found = false;
};

/// Smallest and largest x where the envelope reaches `fraction` of its maximum.
FrontPositions envelope_fronts(const std::vector<double>& envelope, const PeriodicGrid& grid, double fraction);

/// (u² + v²)^{1/2} pointwise.
std::vector<double> mrs_envelope(const MrsState& state);

/// The invariance x-π -> -(x-π), u -> -v, v -> -u.
MrsState mirror_symmetry(const MrsState& state);

/// Compactly supported pulse u = ε[π²/4 - (x-π)²]² for |x-π| < π/2, v = 0.
MrsState mrs_pulse_initial(const PeriodicGrid& grid, double epsilon);

/// ε solving ε²·800·2π = 0.15.
double default_front_epsilon();

/// Runs to config.t_end, storing snapshots and diagnostics in `out` as it goes, so a
/// divergence leaves the partial trajectory in place. Throws SolverDiverged.
void run_mrs_into(const MrsState& initial, const MrsConfig& config, RunOutput& out);

RunOutput run_mrs(const MrsState& initial, const MrsConfig& config);

}  // namespace resonance
