#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "resonance/errors.hpp"
#include "resonance/spectral.hpp"

using namespace resonance;
using test::max_diff;

TEST_CASE("grid requires a power of two of at least 8") {
  CHECK_THROWS_AS(PeriodicGrid(4), InvalidInput);
  CHECK_THROWS_AS(PeriodicGrid(12), InvalidInput);
  const PeriodicGrid g(64);
  CHECK(g.spacing() * static_cast<double>(g.size()) == doctest::Approx(kTwoPi).epsilon(1e-15));
  CHECK(g.wavenumber(g.slot(-3)) == -3);
  CHECK(g.wavenumber(32) == 32);
  CHECK_FALSE(g.resolves(-32));
}

TEST_CASE("field length must match the grid") {
  CHECK_THROWS_AS(RealField(PeriodicGrid(16), std::vector<double>(15)), InvalidInput);
  CHECK_THROWS_AS(SpectralAmplitude(PeriodicGrid(16), std::vector<Complex>(17)), InvalidInput);
}

TEST_CASE("cos x has coefficients 1/2 at k = +-1") {
  const PeriodicGrid g(64);
  RealField f(g);
  for (std::size_t j = 0; j < g.size(); ++j) f.values[j] = std::cos(g.x(j));
  const auto a = to_spectral(f);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const int k = g.wavenumber(j);
    const double expect = (k == 1 || k == -1) ? 0.5 : 0.0;
    CHECK(std::abs(a.coeffs[j] - expect) < 1e-15);
  }
}

TEST_CASE("constant field has only the mean coefficient") {
  const PeriodicGrid g(32);
  const auto a = to_spectral(RealField(g, std::vector<double>(32, 1.0)));
  CHECK(std::abs(a.at(0) - 1.0) < 1e-15);
  for (std::size_t j = 1; j < g.size(); ++j) CHECK(std::abs(a.coeffs[j]) < 1e-15);
}

TEST_CASE("transform round trip and Parseval") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> N(0.0, 1.0);
  for (std::size_t n : {8u, 64u, 1024u}) {
    const PeriodicGrid g(n);
    std::vector<Complex> f(n);
    for (auto& z : f) z = {N(rng), N(rng)};
    const auto a = to_spectral(g, f);
    const auto back = to_physical(a);
    double fmax = 0.0;
    for (auto& z : f) fmax = std::max(fmax, std::abs(z));
    CHECK(max_diff(back, f) < 1e-12 * fmax);
    CHECK(a.energy() == doctest::Approx(mean_square(f)).epsilon(1e-10));
  }
}

TEST_CASE("real inverse transform of a real field") {
  std::mt19937_64 rng(3);
  const PeriodicGrid g(128);
  const RealField f(g, test::smooth_random(g, rng, 10));
  CHECK(max_diff(to_physical_real(to_spectral(f)).values, f.values) < 1e-13);
}

TEST_CASE("derivative and antiderivative multipliers") {
  const PeriodicGrid g(32);
  const auto e1 = [&] {
    SpectralAmplitude a(g);
    a.at(1) = 1.0;
    return a;
  }();
  CHECK(std::abs(apply_multiplier(e1, derivative_symbol()).at(1) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(apply_multiplier(e1, antiderivative_symbol()).at(1) - Complex(0, -1)) < 1e-15);

  std::mt19937_64 rng(11);
  const auto a = test::random_amplitude(g, rng, 10);
  const auto back = apply_multiplier(apply_multiplier(a, antiderivative_symbol()), derivative_symbol());
  CHECK(max_diff(back.coeffs, a.coeffs) < 1e-14);

  SpectralAmplitude with_mean = a;
  with_mean.at(0) = 0.5;
  CHECK_THROWS_AS(apply_multiplier(with_mean, antiderivative_symbol()), DegenerateInput);
}

TEST_CASE("multipliers are linear") {
  const PeriodicGrid g(64);
  std::mt19937_64 rng(5);
  const auto f = test::random_amplitude(g, rng, 20), h = test::random_amplitude(g, rng, 20);
  const Complex alpha(0.3, -1.2), beta(-2.0, 0.4);
  SpectralAmplitude combo(g);
  for (std::size_t j = 0; j < g.size(); ++j) combo.coeffs[j] = alpha * f.coeffs[j] + beta * h.coeffs[j];
  for (const auto& sym : {derivative_symbol(), antiderivative_symbol()}) {
    const auto lhs = apply_multiplier(combo, sym);
    const auto mf = apply_multiplier(f, sym), mh = apply_multiplier(h, sym);
    for (std::size_t j = 0; j < g.size(); ++j)
      CHECK(std::abs(lhs.coeffs[j] - (alpha * mf.coeffs[j] + beta * mh.coeffs[j])) < 1e-12);
  }
}

TEST_CASE("sawtooth profiles") {
  CHECK(sawtooth_eval(SawtoothVariant::S, -kPi / 2) == doctest::Approx(kPi));
  CHECK(sawtooth_eval(SawtoothVariant::S, kPi / 2) == doctest::Approx(-kPi));
  CHECK(sawtooth_eval(SawtoothVariant::K, -kPi / 2) == doctest::Approx(kPi / 2));
  CHECK(sawtooth_eval(SawtoothVariant::S, 0.0) == 0.0);
  CHECK(sawtooth_eval(SawtoothVariant::S, kTwoPi - kPi / 2) == doctest::Approx(kPi));
  for (double x : {0.1, 1.0, 2.5, 3.0}) {
    CHECK(sawtooth_eval(SawtoothVariant::S, -x) == doctest::Approx(-sawtooth_eval(SawtoothVariant::S, x)));
  }
  const PeriodicGrid g(4096);
  double sum = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) sum += sawtooth_eval(SawtoothVariant::S, g.x(j));
  CHECK(std::abs(sum * g.spacing() / kTwoPi) < 1e-10);
}

TEST_CASE("sawtooth kernel coefficients") {
  const auto s = kernel_coefficients(KernelSpec::sawtooth_s(), 16);
  const PeriodicGrid g(16);
  CHECK(std::abs(s[g.slot(1)] - Complex(0, 2)) < 1e-15);
  CHECK(std::abs(s[g.slot(0)]) == 0.0);
  CHECK(std::abs(s[g.slot(-4)] - Complex(0, -0.5)) < 1e-15);
  CHECK(std::abs(KernelSpec::sawtooth_k().coefficient(3) - Complex(0, 1.0 / 3.0)) < 1e-15);

  // Against the trapezoidal Fourier integral of the sampled profile.
  const PeriodicGrid fine(1 << 14);
  RealField f(fine);
  for (std::size_t j = 0; j < fine.size(); ++j) f.values[j] = sawtooth_eval(SawtoothVariant::S, fine.x(j));
  const auto a = to_spectral(f);
  for (int k : {1, 2, -3, 5}) CHECK(std::abs(a.at(k) - KernelSpec::sawtooth_s().coefficient(k)) < 1e-6);
}

TEST_CASE("custom kernel coefficients drop the mean") {
  const auto spec = KernelSpec::custom({{0, 3.0}, {1, Complex(0.5, 0.25)}, {-1, Complex(0.5, -0.25)}});
  const auto c = kernel_coefficients(spec, 8);
  CHECK(c[0] == Complex{});
  CHECK(c[1] == Complex(0.5, 0.25));
  CHECK(c[7] == Complex(0.5, -0.25));
}

namespace {

// (1/2π)∫K(x-y) f'(y) dy (or K(y-x)) by the trapezoidal rule on a 10x finer grid.
std::vector<double> convolve_by_quadrature(const std::function<double(double)>& kernel,
                                           const std::function<double(double)>& fprime, const PeriodicGrid& g,
                                           bool transpose) {
  const std::size_t m = 10 * g.size();
  const double h = kTwoPi / static_cast<double>(m);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double y = static_cast<double>(j) * h;
      s += kernel(transpose ? y - g.x(i) : g.x(i) - y) * fprime(y);
    }
    out[i] = s * h / kTwoPi;
  }
  return out;
}

}  // namespace

TEST_CASE("sawtooth K convolution matches quadrature") {
  const PeriodicGrid g(64);
  RealField f(g);
  for (std::size_t j = 0; j < g.size(); ++j) f.values[j] = std::sin(g.x(j));
  const auto conv = kernel_convolve(KernelSpec::sawtooth_k(), f, false);
  const auto quad = convolve_by_quadrature([](double x) { return sawtooth_eval(SawtoothVariant::K, x); },
                                           [](double y) { return std::cos(y); }, g, false);
  CHECK(max_diff(conv.values, quad) < 1e-4);
  // The multiplier K̂_k·ik = -1 gives back -f.
  std::vector<double> minus_f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) minus_f[j] = -f.values[j];
  CHECK(max_diff(conv.values, minus_f) < 1e-13);

  const auto conv_t = kernel_convolve(KernelSpec::sawtooth_k(), f, true);
  const auto quad_t = convolve_by_quadrature([](double x) { return sawtooth_eval(SawtoothVariant::K, x); },
                                             [](double y) { return std::cos(y); }, g, true);
  CHECK(max_diff(conv_t.values, quad_t) < 1e-4);
}

TEST_CASE("custom single-mode kernel convolution matches quadrature") {
  const Complex k1(0.7, -0.4);
  const auto spec = KernelSpec::custom({{1, k1}, {-1, std::conj(k1)}});
  const PeriodicGrid g(32);
  RealField f(g);
  for (std::size_t j = 0; j < g.size(); ++j) f.values[j] = std::cos(g.x(j));
  const auto kernel = [&](double x) { return 2.0 * (k1 * std::polar(1.0, x)).real(); };
  const auto quad = convolve_by_quadrature(kernel, [](double y) { return -std::sin(y); }, g, false);
  CHECK(max_diff(kernel_convolve(spec, f, false).values, quad) < 1e-12);
  const auto quad_t = convolve_by_quadrature(kernel, [](double y) { return -std::sin(y); }, g, true);
  CHECK(max_diff(kernel_convolve(spec, f, true).values, quad_t) < 1e-12);
}

TEST_CASE("convolution of zero is zero") {
  const PeriodicGrid g(16);
  for (const auto& spec : {KernelSpec::sawtooth_s(), KernelSpec::sawtooth_k()}) {
    const auto out = kernel_convolve(spec, RealField(g), false);
    CHECK(test::max_abs(out.values) == 0.0);
  }
}

TEST_CASE("spectral viscosity") {
  const PeriodicGrid g(64);
  std::mt19937_64 rng(2);
  const auto a = test::random_amplitude(g, rng, 31);
  CHECK(max_diff(spectral_viscosity(a, 0.0, 1.0).coeffs, a.coeffs) == 0.0);
  CHECK_THROWS_AS(spectral_viscosity(a, -1.0, 1.0), InvalidInput);

  SpectralAmplitude single(g);
  single.at(12) = 1.0;
  single.at(3) = 1.0;
  const auto damped = spectral_viscosity(single, 1.0, 1.0);
  CHECK(damped.at(12).real() == doctest::Approx(std::exp(-144.0)).epsilon(1e-12));
  CHECK(damped.at(3) == Complex(1.0));  // below the n/8 cutoff
  const auto all_modes = spectral_viscosity(single, 1.0, 1.0, 0);
  CHECK(all_modes.at(3).real() == doctest::Approx(std::exp(-9.0)).epsilon(1e-12));

  for (int trial = 0; trial < 20; ++trial) {
    const auto r = test::random_amplitude(g, rng, 31);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    CHECK(spectral_viscosity(r, U(rng), U(rng)).energy() <= r.energy());
  }
}

TEST_CASE("dealiased products are exact for band-limited data") {
  const PeriodicGrid g(32);
  SpectralAmplitude a(g), b(g);
  a.at(7) = 1.0;
  a.at(-3) = Complex(0.0, 2.0);
  b.at(8) = 0.5;
  b.at(-9) = 1.0;
  const auto p = dealiased_product(a, b);
  CHECK(std::abs(p.at(15) - 0.5) < 1e-14);
  CHECK(std::abs(p.at(-2) - 1.0) < 1e-14);
  CHECK(std::abs(p.at(5) - Complex(0.0, 1.0)) < 1e-14);
  CHECK(std::abs(p.at(-12) - Complex(0.0, 2.0)) < 1e-14);
  // 7 - 9 = -2 and -3 + 8 = 5 are the only other products; everything else vanishes.
  double rest = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const int k = g.wavenumber(j);
    if (k != 15 && k != -2 && k != 5 && k != -12) rest = std::max(rest, std::abs(p.coeffs[j]));
  }
  CHECK(rest < 1e-14);
}
