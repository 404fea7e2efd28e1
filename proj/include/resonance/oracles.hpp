#pragma once

#include <span>
#include <vector>

#include "resonance/grid.hpp"
#include "resonance/spectral.hpp"

namespace resonance {

enum class Branch { Plus, Minus };

/// ω(k;ε) = k + εω₁ + ε²ω₂ for resonantly reflected linear waves.
struct DispersionResult {
  int k = 0;
  double omega0 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  Branch branch = Branch::Plus;
  long truncation = 0;
};

/// ω₁ = ±½k|S_k| and
/// ω₂ = -ω₁²/(2k) - (k/16) Σ_{n∉{0,k}} (2n-k)²/(n(n-k)) |S_n ± e^{iσ}S_{n-k}|², σ = arg S_k,
/// with the sum truncated to |n| <= truncation. When tail_correction is set the
/// remainder is estimated from the 1/n² decay of the last terms on either side.
/// Throws DegenerateResonance when S_k = 0.
DispersionResult dispersion(const KernelSpec& s, int k, Branch branch, long truncation, bool tail_correction = true);

/// q_k = ½(R_k/S_k + R_k*/S_k*) = Re(R_k/S_k). Throws DegenerateResonance when S_k = 0.
double perturbation_sensitivity(const KernelSpec& s, const KernelSpec& r, int k);

/// Ω = -μ/n - c n²|a₀|².
double single_harmonic_frequency(int n, Complex a0, double mu, double coefficient);

/// The coefficient of e^{inz} at time τ for data a₀e^{inz}: a₀e^{-iΩτ}.
Complex single_harmonic(int n, Complex a0, double mu, double tau, double coefficient);

struct TravelingWavePoint {
  double phi = 0.0;      ///< Φ(ξ)
  Complex a;             ///< 1 - e^{-icΦ(ξ)}
  double residual = 0.0; ///< |Φ - sin(cΦ)/c - ξ/2|
  int iterations = 0;
};

/// Solves Φ - (1/c)sin(cΦ) = ½ξ by safeguarded Newton iteration. The left side is
/// nondecreasing in Φ, so the branch through Φ(0) = 0 is unique. Throws InvalidInput for
/// c = 0 and RootFailure if |residual| <= newton_tol is not reached.
TravelingWavePoint traveling_wave(double c, double xi, double newton_tol = 1e-13);

/// a(z,τ) = 1 - e^{-icΦ(z - cτ)}, a traveling solution of i a_τ = (|a|²a_z)_z.
struct TravelingWaveProfile {
  double c = 1.0;
  double tol = 1e-13;

  double phi(double xi) const { return traveling_wave(c, xi, tol).phi; }
  Complex amplitude(double z, double tau) const { return traveling_wave(c, z - c * tau, tol).a; }
};

/// Brute-force Galerkin truncation of a_τ = -μ∂⁻¹a - i c(|a|²a_z)_z onto the given
/// wavenumbers (at most 32, none zero). The cubic term is an exact triple convolution
/// over the mode set; the ODEs are integrated with an adaptive Runge–Kutta–Fehlberg 7(8)
/// method at absolute and relative tolerance `tol`.
std::vector<Complex> galerkin_oracle(std::span<const int> wavenumbers, std::span<const Complex> initial, double mu,
                                     double coefficient, double tau_end, double tol = 1e-12);

/// Convenience form: truncates `a` to 0 < |k| <= kmax and returns the evolved amplitude
/// on the same grid.
SpectralAmplitude galerkin_oracle(const SpectralAmplitude& a, int kmax, double mu, double coefficient, double tau_end,
                                  double tol = 1e-12);

}  // namespace resonance
