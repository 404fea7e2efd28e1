#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace resonance {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform grid x_j = j*h, j = 0..n-1, on the 2π-periodic domain.
///
/// Spectral arrays attached to a grid use FFT ordering: slot j holds wavenumber j for
/// j <= n/2 and j - n otherwise, so the resolved range is -n/2 < k <= n/2.
class PeriodicGrid {
 public:
  /// Throws InvalidInput unless n_points is a power of two and at least 8.
  explicit PeriodicGrid(std::size_t n_points);

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return kTwoPi; }
  double spacing() const noexcept { return kTwoPi / static_cast<double>(n_); }
  double x(std::size_t j) const noexcept { return static_cast<double>(j) * spacing(); }
  std::vector<double> coordinates() const;

  int nyquist() const noexcept { return static_cast<int>(n_ / 2); }
  int wavenumber(std::size_t slot) const noexcept {
    return slot <= n_ / 2 ? static_cast<int>(slot) : static_cast<int>(slot) - static_cast<int>(n_);
  }
  /// Slot of wavenumber k; k must lie in the resolved range.
  std::size_t slot(int k) const noexcept {
    return k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(static_cast<int>(n_) + k);
  }
  bool resolves(int k) const noexcept { return k > -nyquist() && k <= nyquist(); }

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  std::size_t n_;
};

/// Real samples on a grid.
struct RealField {
  RealField(PeriodicGrid g, std::vector<double> v);
  explicit RealField(PeriodicGrid g) : grid(g), values(g.size(), 0.0) {}

  double mean() const;

  PeriodicGrid grid;
  std::vector<double> values;
};

/// Fourier coefficients â_k (FFT order) of a periodic field, a(x) = Σ â_k e^{ikx}.
struct SpectralAmplitude {
  SpectralAmplitude(PeriodicGrid g, std::vector<Complex> c);
  explicit SpectralAmplitude(PeriodicGrid g) : grid(g), coeffs(g.size(), Complex{}) {}

  Complex& at(int k) { return coeffs[grid.slot(k)]; }
  const Complex& at(int k) const { return coeffs[grid.slot(k)]; }
  /// Σ|â_k|², equal to (1/2π)∫|a|² dx.
  double energy() const;

  PeriodicGrid grid;
  std::vector<Complex> coeffs;
};

}  // namespace resonance
