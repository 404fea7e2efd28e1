#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "resonance/grid.hpp"

namespace resonance {

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

/// Forward transform with â_k = (1/n) Σ_j f_j e^{-ik x_j}.
SpectralAmplitude to_spectral(const RealField& f);
SpectralAmplitude to_spectral(const PeriodicGrid& grid, std::span<const Complex> values);

/// Inverse transform, f_j = Σ_k â_k e^{ik x_j}.
std::vector<Complex> to_physical(const SpectralAmplitude& a);
/// Real part of the inverse transform; exact for Hermitian coefficient sets.
RealField to_physical_real(const SpectralAmplitude& a);

/// Mean of |f|² over the grid, i.e. (1/2π)∫|f|² by the trapezoidal rule.
double mean_square(std::span<const Complex> values);
double mean_square(std::span<const double> values);

// ---------------------------------------------------------------------------
// Fourier multipliers
// ---------------------------------------------------------------------------

/// A Fourier multiplier k -> m(k). A symbol that is singular at k = 0 maps the mean to
/// zero and refuses inputs with nonzero mean. Odd symbols (derivatives) also zero the
/// Nyquist mode, which has no odd counterpart on the grid.
struct MultiplierSymbol {
  std::function<Complex(int)> value;
  bool singular_at_zero = false;
  bool zero_nyquist = false;
};

/// ∂_z, symbol ik.
MultiplierSymbol derivative_symbol();
/// ∂_z^{-1} on zero-mean functions, symbol 1/(ik).
MultiplierSymbol antiderivative_symbol();

SpectralAmplitude apply_multiplier(const SpectralAmplitude& a, const MultiplierSymbol& symbol);

// ---------------------------------------------------------------------------
// Sawtooth profiles and entropy-wave kernels
// ---------------------------------------------------------------------------

/// S(x) = 2(x+π) on [-π,0), 2(x-π) on (0,π];  K(x) = S(x)/2.
enum class SawtoothVariant { S, K };

/// Evaluates the sawtooth after reducing x into (-π, π]. Returns 0 at the jump x = 0
/// (the midpoint of the one-sided limits, where the Fourier series converges).
double sawtooth_eval(SawtoothVariant variant, double x);

struct KernelSpec {
  enum class Variant { SawtoothS, SawtoothK, Custom };

  static KernelSpec sawtooth_s() { return {Variant::SawtoothS, {}}; }
  static KernelSpec sawtooth_k() { return {Variant::SawtoothK, {}}; }
  static KernelSpec custom(std::map<int, Complex> coeffs) { return {Variant::Custom, std::move(coeffs)}; }

  /// Ŝ_k (or K̂_k) for a single wavenumber; zero at k = 0.
  Complex coefficient(int k) const;

  Variant variant = Variant::SawtoothK;
  /// Sparse K̂_k for Custom kernels; the k = 0 entry is ignored.
  std::map<int, Complex> custom_coeffs;
};

const char* to_string(KernelSpec::Variant v);

/// Kernel coefficients on an n-point grid, FFT order. Custom entries outside the
/// resolved range are dropped.
std::vector<Complex> kernel_coefficients(const KernelSpec& spec, std::size_t n);

/// (1/2π)∫K(x-y) f_y(y) dy, or with K(y-x) when transpose is set. Multiplier K̂_k·ik
/// (resp. K̂_{-k}·ik).
RealField kernel_convolve(const KernelSpec& spec, const RealField& f, bool transpose);

// ---------------------------------------------------------------------------
// Spectral viscosity and dealiasing
// ---------------------------------------------------------------------------

/// Damping profile q(k) = k² for |k| > cutoff, else 0.
double viscosity_profile(int k, int cutoff);
/// Default activation cutoff n/8.
int default_viscosity_cutoff(std::size_t n);

/// Multiplies â_k by exp(-nu q(k) dt). cutoff < 0 selects the default.
SpectralAmplitude spectral_viscosity(const SpectralAmplitude& a, double nu, double dt, int cutoff = -1);

/// Copies coefficients of an FFT-ordered spectrum into a larger (zero-filled) one.
/// The source Nyquist mode is dropped.
std::vector<Complex> pad_spectrum(std::span<const Complex> coeffs, std::size_t m);
/// Inverse of pad_spectrum: keeps -n/2 < k < n/2 and zeros the Nyquist slot.
std::vector<Complex> truncate_spectrum(std::span<const Complex> coeffs, std::size_t n);

/// Grid size for exact products of `order` factors: 3n/2 for quadratic, 2n for cubic.
std::size_t dealiased_size(std::size_t n, int order);

/// Coefficients of the pointwise product a·b, computed on the 3/2-padded grid.
SpectralAmplitude dealiased_product(const SpectralAmplitude& a, const SpectralAmplitude& b);

}  // namespace resonance
