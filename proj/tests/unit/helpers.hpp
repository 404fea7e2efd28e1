#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "resonance/grid.hpp"
#include "resonance/spectral.hpp"

namespace test {

using resonance::Complex;

inline double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

/// Random smooth real field: a few low modes with decaying random amplitudes, zero mean.
inline std::vector<double> smooth_random(const resonance::PeriodicGrid& g, std::mt19937_64& rng, int modes = 4,
                                         double scale = 1.0) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<double> f(g.size(), 0.0);
  for (int k = 1; k <= modes; ++k) {
    const double a = N(rng) * scale / k, b = N(rng) * scale / k;
    for (std::size_t j = 0; j < g.size(); ++j) f[j] += a * std::cos(k * g.x(j)) + b * std::sin(k * g.x(j));
  }
  return f;
}

/// Random zero-mean band-limited complex amplitude with |k| <= kmax.
inline resonance::SpectralAmplitude random_amplitude(const resonance::PeriodicGrid& g, std::mt19937_64& rng,
                                                     int kmax, double scale = 1.0) {
  std::normal_distribution<double> N(0.0, 1.0);
  resonance::SpectralAmplitude a(g);
  for (int k = -kmax; k <= kmax; ++k) {
    if (k == 0) continue;
    a.at(k) = scale * Complex(N(rng), N(rng)) / static_cast<double>(k * k);
  }
  return a;
}

}  // namespace test
