#pragma once

#include <span>
#include <vector>

#include "resonance/grid.hpp"
#include "resonance/mrs.hpp"

namespace resonance {

/// Entropy-wave strength ε, adiabatic exponent γ and sound-wave strength M.
struct ScalingParams {
  double epsilon = 0.01;
  double gamma = 1.4;
  double mach = 1e-3;

  void validate() const;
};

/// Second-order terms of the MRS expansion: u₂ = Be^{-2it} - M + c.c.,
/// v₂ = Ce^{-2it} + M + c.c. (homogeneous parts taken as zero).
struct SecondOrderCorrection {
  std::vector<Complex> B;
  std::vector<Complex> C;
  std::vector<double> M;
};

SecondOrderCorrection second_order_correction(const SpectralAmplitude& a);

/// u = εae^{-it} + c.c., v = -iεae^{-it} + c.c.; order 2 adds ε²(u₂, v₂).
MrsState reconstruct_mrs(const SpectralAmplitude& a, double epsilon, double t, int order = 1);

/// a = e^{it}(u + iv)/(2ε), projected to zero mean unless zero_mean is false (data with
/// compact support, whose mean rotates with the carrier).
SpectralAmplitude extract_amplitude(const MrsState& state, double epsilon, bool zero_mean = true);

/// Demodulates each state and averages; with states spread uniformly over one period
/// this removes the e^{-2it} contamination of the order-two terms.
SpectralAmplitude extract_amplitude_averaged(std::span<const MrsState> states, double epsilon, bool zero_mean = true);

/// ν(x,t) = ε^{3/2}{a(t-x) - i a(t+x)}e^{-iεt} + c.c., with a evaluated by its Fourier series
/// (the amplitude is supplied at the slow time ε²t).
std::vector<double> reconstruct_lagrangian_velocity(const SpectralAmplitude& a, double epsilon,
                                                    std::span<const double> x, double t);

/// Fourier series Σ â_k e^{ikz} at arbitrary points.
std::vector<Complex> evaluate_series(const SpectralAmplitude& a, std::span<const double> z);

struct Normalization {
  double mu = 0.0;               ///< ε³/(2M²)
  double amplitude_scale = 0.0;  ///< a = amplitude_scale · ã
  double time_scale = 0.0;       ///< τ̃ = time_scale · τ
  double frame_shift_rate = 0.0; ///< z̃ = z + frame_shift_rate · τ
};

/// Change of variables taking the gas-dynamics amplitude equation to
/// i(a_τ + μ∂⁻¹a) = (|a|²a_z)_z. Throws InvalidInput for M = 0.
Normalization normalize(const ScalingParams& params);

/// Physical amplitude a(·, τ) -> normalized ã(·, τ̃) at τ̃ = time_scale·τ.
SpectralAmplitude to_normalized(const SpectralAmplitude& a, double tau, const Normalization& norm);
/// Inverse of to_normalized; the normalized time is supplied.
SpectralAmplitude from_normalized(const SpectralAmplitude& a_tilde, double tau_tilde, const Normalization& norm);

/// Coefficient (γ+1)²/6 of the quasilinear term.
double asyeq_coefficient(double gamma);

}  // namespace resonance
