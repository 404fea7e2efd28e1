#include "resonance/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "resonance/errors.hpp"
#include "resonance/fft.hpp"

namespace resonance {

PeriodicGrid::PeriodicGrid(std::size_t n_points) : n_(n_points) {
  if (n_points < 8 || !std::has_single_bit(n_points))
    throw InvalidInput("grid size must be a power of two >= 8, got " + std::to_string(n_points));
}

std::vector<double> PeriodicGrid::coordinates() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

RealField::RealField(PeriodicGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw InvalidInput("field length " + std::to_string(values.size()) + " does not match grid size " +
                       std::to_string(grid.size()));
}

double RealField::mean() const {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

SpectralAmplitude::SpectralAmplitude(PeriodicGrid g, std::vector<Complex> c) : grid(g), coeffs(std::move(c)) {
  if (coeffs.size() != grid.size())
    throw InvalidInput("coefficient count " + std::to_string(coeffs.size()) + " does not match grid size " +
                       std::to_string(grid.size()));
}

double SpectralAmplitude::energy() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  return s;
}

SpectralAmplitude to_spectral(const PeriodicGrid& grid, std::span<const Complex> values) {
  if (values.size() != grid.size())
    throw InvalidInput("field length " + std::to_string(values.size()) + " does not match grid size " +
                       std::to_string(grid.size()));
  SpectralAmplitude a(grid);
  fft::forward(values, a.coeffs);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : a.coeffs) c *= scale;
  return a;
}

SpectralAmplitude to_spectral(const RealField& f) {
  std::vector<Complex> tmp(f.values.begin(), f.values.end());
  return to_spectral(f.grid, tmp);
}

std::vector<Complex> to_physical(const SpectralAmplitude& a) {
  std::vector<Complex> out(a.coeffs.size());
  fft::backward(a.coeffs, out);
  return out;
}

RealField to_physical_real(const SpectralAmplitude& a) {
  const auto z = to_physical(a);
  RealField f(a.grid);
  std::transform(z.begin(), z.end(), f.values.begin(), [](const Complex& c) { return c.real(); });
  return f;
}

double mean_square(std::span<const Complex> values) {
  double s = 0.0;
  for (const auto& c : values) s += std::norm(c);
  return s / static_cast<double>(values.size());
}

double mean_square(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s / static_cast<double>(values.size());
}

MultiplierSymbol derivative_symbol() {
  return {[](int k) { return Complex(0.0, static_cast<double>(k)); }, false, true};
}

MultiplierSymbol antiderivative_symbol() {
  return {[](int k) { return k == 0 ? Complex{} : Complex(0.0, -1.0 / static_cast<double>(k)); }, true, true};
}

SpectralAmplitude apply_multiplier(const SpectralAmplitude& a, const MultiplierSymbol& symbol) {
  const auto& g = a.grid;
  if (symbol.singular_at_zero) {
    const double scale = std::sqrt(a.energy());
    if (std::abs(a.coeffs[0]) > 1e-12 * std::max(scale, 1.0))
      throw DegenerateInput("singular multiplier applied to data with nonzero mean");
  }
  SpectralAmplitude out(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const int k = g.wavenumber(j);
    if (k == 0 && symbol.singular_at_zero) continue;
    if (k == g.nyquist() && symbol.zero_nyquist) continue;
    out.coeffs[j] = symbol.value(k) * a.coeffs[j];
  }
  return out;
}

double sawtooth_eval(SawtoothVariant variant, double x) {
  // Reduce into (-π, π].
  double r = std::fmod(x + kPi, kTwoPi);
  if (r < 0) r += kTwoPi;
  r -= kPi;
  if (r == -kPi) r = kPi;
  double s = 0.0;
  if (r < 0) {
    s = 2.0 * (r + kPi);
  } else if (r > 0) {
    s = 2.0 * (r - kPi);
  }
  return variant == SawtoothVariant::S ? s : 0.5 * s;
}

Complex KernelSpec::coefficient(int k) const {
  if (k == 0) return {};
  switch (variant) {
    case Variant::SawtoothS:
      return {0.0, 2.0 / static_cast<double>(k)};
    case Variant::SawtoothK:
      return {0.0, 1.0 / static_cast<double>(k)};
    case Variant::Custom: {
      auto it = custom_coeffs.find(k);
      return it == custom_coeffs.end() ? Complex{} : it->second;
    }
  }
  return {};
}

const char* to_string(KernelSpec::Variant v) {
  switch (v) {
    case KernelSpec::Variant::SawtoothS: return "sawtooth-s";
    case KernelSpec::Variant::SawtoothK: return "sawtooth-k";
    case KernelSpec::Variant::Custom: return "custom";
  }
  return "unknown";
}

std::vector<Complex> kernel_coefficients(const KernelSpec& spec, std::size_t n) {
  if (n < 2 || !std::has_single_bit(n)) throw InvalidInput("kernel grid size must be a power of two");
  std::vector<Complex> out(n);
  for (std::size_t j = 1; j < n; ++j) {
    const int k = j <= n / 2 ? static_cast<int>(j) : static_cast<int>(j) - static_cast<int>(n);
    out[j] = spec.coefficient(k);
  }
  return out;
}

RealField kernel_convolve(const KernelSpec& spec, const RealField& f, bool transpose) {
  const auto& g = f.grid;
  auto fh = to_spectral(f);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const int k = g.wavenumber(j);
    if (k == 0 || k == g.nyquist()) {
      fh.coeffs[j] = {};
      continue;
    }
    const Complex kh = spec.coefficient(transpose ? -k : k);
    fh.coeffs[j] *= kh * Complex(0.0, static_cast<double>(k));
  }
  return to_physical_real(fh);
}

double viscosity_profile(int k, int cutoff) {
  return std::abs(k) > cutoff ? static_cast<double>(k) * static_cast<double>(k) : 0.0;
}

int default_viscosity_cutoff(std::size_t n) { return static_cast<int>(n / 8); }

SpectralAmplitude spectral_viscosity(const SpectralAmplitude& a, double nu, double dt, int cutoff) {
  if (!(nu >= 0.0)) throw InvalidInput("spectral viscosity must be non-negative");
  if (nu == 0.0) return a;
  if (cutoff < 0) cutoff = default_viscosity_cutoff(a.grid.size());
  SpectralAmplitude out = a;
  for (std::size_t j = 0; j < out.coeffs.size(); ++j) {
    const double q = viscosity_profile(a.grid.wavenumber(j), cutoff);
    if (q > 0.0) out.coeffs[j] *= std::exp(-nu * q * dt);
  }
  return out;
}

std::vector<Complex> pad_spectrum(std::span<const Complex> coeffs, std::size_t m) {
  const std::size_t n = coeffs.size();
  if (m < n) throw InvalidInput("pad_spectrum: target smaller than source");
  std::vector<Complex> out(m);
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j < half; ++j) out[j] = coeffs[j];
  for (std::size_t j = 1; j < half; ++j) out[m - j] = coeffs[n - j];
  return out;
}

std::vector<Complex> truncate_spectrum(std::span<const Complex> coeffs, std::size_t n) {
  const std::size_t m = coeffs.size();
  if (m < n) throw InvalidInput("truncate_spectrum: target larger than source");
  std::vector<Complex> out(n);
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j < half; ++j) out[j] = coeffs[j];
  for (std::size_t j = 1; j < half; ++j) out[n - j] = coeffs[m - j];
  return out;
}

std::size_t dealiased_size(std::size_t n, int order) {
  if (order <= 1) return n;
  if (order == 2) return 3 * n / 2;
  return static_cast<std::size_t>(order) * n / 2;
}

SpectralAmplitude dealiased_product(const SpectralAmplitude& a, const SpectralAmplitude& b) {
  if (!(a.grid == b.grid)) throw InvalidInput("dealiased_product: grid mismatch");
  const std::size_t n = a.grid.size();
  const std::size_t m = dealiased_size(n, 2);
  auto pa = pad_spectrum(a.coeffs, m);
  auto pb = pad_spectrum(b.coeffs, m);
  std::vector<Complex> fa(m), fb(m);
  fft::backward(pa, fa);
  fft::backward(pb, fb);
  for (std::size_t j = 0; j < m; ++j) fa[j] *= fb[j];
  fft::forward(fa, pa);
  const double scale = 1.0 / static_cast<double>(m);
  for (auto& c : pa) c *= scale;
  return SpectralAmplitude(a.grid, truncate_spectrum(pa, n));
}

}  // namespace resonance
