#include "resonance/asymptotics.hpp"

#include <cmath>

#include "resonance/errors.hpp"
#include "resonance/spectral.hpp"

namespace resonance {

void ScalingParams::validate() const {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (!(gamma > 1.0)) throw InvalidInput("gamma must exceed 1");
  if (!(mach > 0.0)) throw InvalidInput("mach must be positive (mu = eps^3/(2 M^2) would be infinite)");
}

SecondOrderCorrection second_order_correction(const SpectralAmplitude& a) {
  const auto a2 = dealiased_product(a, a);
  const auto a2x = to_physical(apply_multiplier(a2, derivative_symbol()));

  SpectralAmplitude conj_a(a.grid);
  for (std::size_t j = 0; j < a.coeffs.size(); ++j) {
    // conj(a) has coefficients conj(â_{-k}).
    const int k = a.grid.wavenumber(j);
    if (k == a.grid.nyquist()) continue;
    conj_a.coeffs[j] = std::conj(a.at(-k));
  }
  const auto mod2 = dealiased_product(a, conj_a);
  const auto mod2x = to_physical(apply_multiplier(mod2, derivative_symbol()));

  SecondOrderCorrection s;
  const Complex cb = -Complex(1.0, 2.0) / 6.0;
  const Complex cc = -Complex(1.0, -2.0) / 6.0;
  s.B.resize(a2x.size());
  s.C.resize(a2x.size());
  s.M.resize(a2x.size());
  for (std::size_t j = 0; j < a2x.size(); ++j) {
    s.B[j] = cb * a2x[j];
    s.C[j] = cc * a2x[j];
    s.M[j] = 0.5 * mod2x[j].real();
  }
  return s;
}

MrsState reconstruct_mrs(const SpectralAmplitude& a, double epsilon, double t, int order) {
  if (order != 1 && order != 2) throw InvalidInput("reconstruction order must be 1 or 2");
  const auto& grid = a.grid;
  const auto phys = to_physical(a);
  const Complex phase = std::polar(1.0, -t);
  MrsState s{RealField(grid), RealField(grid), t};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Complex w = epsilon * phys[j] * phase;
    s.u.values[j] = 2.0 * w.real();
    s.v.values[j] = 2.0 * (Complex(0.0, -1.0) * w).real();
  }
  if (order == 2) {
    const auto corr = second_order_correction(a);
    const Complex phase2 = std::polar(1.0, -2.0 * t);
    const double e2 = epsilon * epsilon;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      s.u.values[j] += e2 * 2.0 * ((corr.B[j] * phase2).real() - corr.M[j]);
      s.v.values[j] += e2 * 2.0 * ((corr.C[j] * phase2).real() + corr.M[j]);
    }
  }
  return s;
}

SpectralAmplitude extract_amplitude(const MrsState& state, double epsilon, bool zero_mean) {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  const auto& grid = state.u.grid;
  const Complex phase = std::polar(1.0, state.time) / (2.0 * epsilon);
  std::vector<Complex> z(grid.size());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = phase * Complex(state.u.values[j], state.v.values[j]);
  auto a = to_spectral(grid, z);
  if (zero_mean) a.coeffs[0] = {};
  return a;
}

SpectralAmplitude extract_amplitude_averaged(std::span<const MrsState> states, double epsilon, bool zero_mean) {
  if (states.empty()) throw InvalidInput("no states to average");
  SpectralAmplitude acc(states.front().u.grid);
  for (const auto& s : states) {
    const auto a = extract_amplitude(s, epsilon, zero_mean);
    for (std::size_t j = 0; j < acc.coeffs.size(); ++j) acc.coeffs[j] += a.coeffs[j];
  }
  for (auto& c : acc.coeffs) c /= static_cast<double>(states.size());
  return acc;
}

std::vector<Complex> evaluate_series(const SpectralAmplitude& a, std::span<const double> z) {
  std::vector<Complex> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    Complex s{};
    for (std::size_t j = 0; j < a.coeffs.size(); ++j) {
      if (a.coeffs[j] == Complex{}) continue;
      s += a.coeffs[j] * std::polar(1.0, a.grid.wavenumber(j) * z[i]);
    }
    out[i] = s;
  }
  return out;
}

std::vector<double> reconstruct_lagrangian_velocity(const SpectralAmplitude& a, double epsilon,
                                                    std::span<const double> x, double t) {
  std::vector<double> right(x.size()), left(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    right[i] = t - x[i];
    left[i] = t + x[i];
  }
  const auto ar = evaluate_series(a, right);
  const auto al = evaluate_series(a, left);
  const double amp = std::pow(epsilon, 1.5);
  const Complex phase = std::polar(1.0, -epsilon * t);
  std::vector<double> nu(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Complex w = amp * (ar[i] - Complex(0.0, 1.0) * al[i]) * phase;
    nu[i] = 2.0 * w.real();
  }
  return nu;
}

Normalization normalize(const ScalingParams& p) {
  p.validate();
  const double e3 = p.epsilon * p.epsilon * p.epsilon;
  Normalization n;
  n.mu = e3 / (2.0 * p.mach * p.mach);
  n.amplitude_scale = std::sqrt(6.0) * p.mach / ((p.gamma + 1.0) * std::pow(p.epsilon, 1.5));
  n.time_scale = p.mach * p.mach / e3;
  n.frame_shift_rate = 0.5 * kPi * kPi;
  return n;
}

namespace {

// b(z) = s·c(z + shift): b̂_k = s e^{ik shift} ĉ_k.
SpectralAmplitude scale_and_shift(const SpectralAmplitude& c, double s, double shift) {
  SpectralAmplitude out = c;
  for (std::size_t j = 0; j < out.coeffs.size(); ++j)
    out.coeffs[j] *= s * std::polar(1.0, c.grid.wavenumber(j) * shift);
  return out;
}

}  // namespace

SpectralAmplitude to_normalized(const SpectralAmplitude& a, double tau, const Normalization& norm) {
  // a(z,τ) = A ã(z + ρτ, Tτ)  =>  ã(z̃) = a(z̃ - ρτ)/A.
  return scale_and_shift(a, 1.0 / norm.amplitude_scale, -norm.frame_shift_rate * tau);
}

SpectralAmplitude from_normalized(const SpectralAmplitude& a_tilde, double tau_tilde, const Normalization& norm) {
  const double tau = tau_tilde / norm.time_scale;
  return scale_and_shift(a_tilde, norm.amplitude_scale, norm.frame_shift_rate * tau);
}

double asyeq_coefficient(double gamma) {
  // γ = 1 is allowed as the limit that recovers the 2/3 coefficient.
  if (!(gamma >= 1.0)) throw InvalidInput("gamma must be at least 1");
  return (gamma + 1.0) * (gamma + 1.0) / 6.0;
}

}  // namespace resonance
