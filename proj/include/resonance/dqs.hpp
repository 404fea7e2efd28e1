#pragma once

#include <span>
#include <vector>

#include "resonance/grid.hpp"
#include "resonance/run_output.hpp"

namespace resonance {

/// Nonlinear coefficient that turns a_τ = -μ∂⁻¹a - i c(|a|²a_z)_z into the
/// amplitude equation of the MRS system, i a_τ + ((2/3)|a|²a_x)_x = 0.
inline constexpr double kMrsAmplitudeCoefficient = -2.0 / 3.0;

struct DqsConfig {
  /// Dispersion strength μ >= 0.
  double mu = 1.0;
  double dt = 1e-4;
  double tau_end = 1.0;
  std::vector<double> snapshot_taus;
  double viscosity_nu = 0.0;
  /// Spectral-viscosity activation cutoff; negative selects n/8.
  int viscosity_cutoff = -1;
  double picard_tol = 1e-12;
  int picard_max_iters = 500;
  /// History length of the Anderson mixing applied to the Picard map; 0 is plain Picard.
  int anderson_depth = 8;
  /// c in i(a_τ + μ∂⁻¹a) = c(|a|²a_z)_z.
  double nonlinear_coefficient = 1.0;
  /// Diagnostic sample spacing in τ; 0 samples after every step.
  double diagnostic_interval = 0.0;
  /// Consecutive dt halvings tried when the stage solve fails.
  int max_dt_halvings = 3;
  double front_fraction = 0.01;

  void validate() const;
};

/// a_τ = -μ∂_z⁻¹a - i c(|a|²a_z)_z. The cubic product is formed on the 2n grid, which
/// is alias-free for cubic terms. With μ > 0 the mean must vanish (DegenerateInput otherwise);
/// with μ = 0 the mean is carried along unchanged.
SpectralAmplitude dqs_rhs(const SpectralAmplitude& a, double mu, double coefficient = 1.0);

struct StepReport {
  int iterations = 0;
  double increment = 0.0;
};

/// One implicit-midpoint step a⁺ = a + dt F((a + a⁺)/2), followed by spectral viscosity
/// when configured. The stage equation is solved by a Picard iteration preconditioned with
/// a finite-difference discretization of the stiff part frozen at a, accelerated by Anderson
/// mixing. Throws
/// StepFailure when picard_tol is not reached within picard_max_iters.
SpectralAmplitude implicit_step(const SpectralAmplitude& a, const DqsConfig& config, StepReport* report = nullptr);
SpectralAmplitude implicit_step(const SpectralAmplitude& a, const DqsConfig& config, double dt,
                                StepReport* report = nullptr);

/// Runs to tau_end, writing into `out` as it goes. A failing step is retried with dt
/// halved up to max_dt_halvings times before StepFailure propagates.
void run_dqs_into(const SpectralAmplitude& initial, const DqsConfig& config, RunOutput& out);
RunOutput run_dqs(const SpectralAmplitude& initial, const DqsConfig& config);

/// The μ = 0 flow with the MRS amplitude coefficient. Data that vanish somewhere on the
/// grid need viscosity_nu > 0.
RunOutput run_mrs_amplitude(const SpectralAmplitude& initial, DqsConfig config);
void run_mrs_amplitude_into(const SpectralAmplitude& initial, DqsConfig config, RunOutput& out);

/// a(z,0) = -e^{iz} + ½e^{2i(z+2π²)}.
SpectralAmplitude two_harmonic_initial(const PeriodicGrid& grid);

/// a₀e^{inz}.
SpectralAmplitude single_harmonic_initial(const PeriodicGrid& grid, int n, Complex a0);

/// Least-squares slope of log||a|(z₀±jh) - |a|(z₀)| against log(jh), j = 1..max_offset:
/// a local Hölder-exponent estimate of |a| at grid index `center`. Diagnostic only.
double holder_exponent_estimate(std::span<const Complex> a, const PeriodicGrid& grid, std::size_t center,
                                int max_offset = 8);

}  // namespace resonance
