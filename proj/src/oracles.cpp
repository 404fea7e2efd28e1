#include "resonance/oracles.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <map>
#include <string>

#include "resonance/errors.hpp"

namespace resonance {
namespace {

// Neumaier-compensated sum.
struct CompensatedSum {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Σ_{n > N} 1/n² to O(N^-4).
double inverse_square_tail(double n) { return 1.0 / n - 0.5 / (n * n) + 1.0 / (6.0 * n * n * n); }

// x - sin x without cancellation for small x.
double x_minus_sin(double x) {
  if (std::abs(x) < 0.5) {
    const double x2 = x * x;
    return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0 * (1.0 - x2 / 156.0)))));
  }
  return x - std::sin(x);
}

}  // namespace

DispersionResult dispersion(const KernelSpec& s, int k, Branch branch, long truncation, bool tail_correction) {
  if (k == 0) throw InvalidInput("dispersion needs a nonzero wavenumber");
  if (truncation < 16) throw InvalidInput("truncation must be at least 16");
  const Complex sk = s.coefficient(k);
  if (std::abs(sk) == 0.0) throw DegenerateResonance("S_k = 0: the resonant branch split is undefined");

  const double sign = branch == Branch::Plus ? 1.0 : -1.0;
  const Complex rot = sign * std::polar(1.0, std::arg(sk));
  const double kd = static_cast<double>(k);

  auto term = [&](long n) {
    const double nd = static_cast<double>(n);
    const double w = (2.0 * nd - kd) * (2.0 * nd - kd) / (nd * (nd - kd));
    return w * std::norm(s.coefficient(static_cast<int>(n)) + rot * s.coefficient(static_cast<int>(n - k)));
  };

  // Sum from the outside in so small terms accumulate first.
  CompensatedSum acc;
  for (long n = truncation; n >= 1; --n) {
    if (n != k) acc.add(term(n));
    if (-n != k) acc.add(term(-n));
  }
  double sum = acc.value();
  if (tail_correction) {
    const double nd = static_cast<double>(truncation);
    sum += term(truncation) * nd * nd * inverse_square_tail(nd);
    sum += term(-truncation) * nd * nd * inverse_square_tail(nd);
  }

  DispersionResult r;
  r.k = k;
  r.branch = branch;
  r.truncation = truncation;
  r.omega0 = kd;
  r.omega1 = sign * 0.5 * kd * std::abs(sk);
  r.omega2 = -r.omega1 * r.omega1 / (2.0 * kd) - kd / 16.0 * sum;
  return r;
}

double perturbation_sensitivity(const KernelSpec& s, const KernelSpec& r, int k) {
  const Complex sk = s.coefficient(k);
  if (std::abs(sk) == 0.0) throw DegenerateResonance("S_k = 0: sensitivity undefined");
  const Complex rk = r.coefficient(k);
  return 0.5 * (rk / sk + std::conj(rk) / std::conj(sk)).real();
}

double single_harmonic_frequency(int n, Complex a0, double mu, double coefficient) {
  if (n == 0) throw InvalidInput("harmonic index must be nonzero");
  const double nd = static_cast<double>(n);
  return -mu / nd - coefficient * nd * nd * std::norm(a0);
}

Complex single_harmonic(int n, Complex a0, double mu, double tau, double coefficient) {
  return a0 * std::polar(1.0, -single_harmonic_frequency(n, a0, mu, coefficient) * tau);
}

TravelingWavePoint traveling_wave(double c, double xi, double newton_tol) {
  if (c == 0.0) throw InvalidInput("traveling-wave speed must be nonzero");
  if (!std::isfinite(xi)) throw InvalidInput("xi must be finite");
  const double target = 0.5 * xi;
  auto g = [&](double phi) { return x_minus_sin(c * phi) / c - target; };
  auto dg = [&](double phi) {
    // 1 - cos(cφ) = 2 sin²(cφ/2)
    const double s = std::sin(0.5 * c * phi);
    return 2.0 * s * s;
  };

  TravelingWavePoint p;
  if (xi == 0.0) {
    p.a = {};
    return p;
  }
  // |sin(cφ)/c| <= 1/|c| brackets the root.
  double lo = target - 1.0 / std::abs(c), hi = target + 1.0 / std::abs(c);
  double phi = std::abs(c * target) < 1.0 ? std::cbrt(3.0 * xi / (c * c)) : target;
  phi = std::clamp(phi, lo, hi);

  double res = g(phi);
  int it = 0;
  for (; it < 200 && std::abs(res) > newton_tol; ++it) {
    if (res > 0) hi = phi;
    else lo = phi;
    const double d = dg(phi);
    double next = d > 0.0 ? phi - res / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == phi) break;
    phi = next;
    res = g(phi);
  }
  if (!(std::abs(res) <= newton_tol))
    throw RootFailure("traveling-wave phase did not converge: xi=" + std::to_string(xi) + " c=" + std::to_string(c) +
                      " residual=" + std::to_string(res) + " after " + std::to_string(it) + " iterations");
  p.phi = phi;
  p.a = 1.0 - std::polar(1.0, -c * phi);
  p.residual = std::abs(res);
  p.iterations = it;
  return p;
}

std::vector<Complex> galerkin_oracle(std::span<const int> ks, std::span<const Complex> initial, double mu,
                                     double coefficient, double tau_end, double tol) {
  if (ks.size() != initial.size()) throw InvalidInput("wavenumber and coefficient counts differ");
  if (ks.size() > 32) throw InvalidInput("Galerkin oracle is limited to 32 modes");
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] == 0) throw InvalidInput("the zero mode is excluded (zero-mean amplitude)");
    if (!index.emplace(ks[i], i).second) throw InvalidInput("duplicate wavenumber");
  }
  const std::size_t m = ks.size();

  // Triples (p, q, r) with p + (-q) + r = k, all of p, q, r in the mode set, where the
  // middle factor is conj(a) whose k-coefficient is conj(â_{-k}) = conj(â_q).
  struct Triple {
    std::size_t p, q, r;
    double rk;
  };
  std::vector<std::vector<Triple>> triples(m);
  for (std::size_t out = 0; out < m; ++out) {
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = 0; q < m; ++q) {
        const int r = ks[out] - ks[p] + ks[q];
        if (auto it = index.find(r); it != index.end())
          triples[out].push_back({p, q, it->second, static_cast<double>(r)});
      }
    }
  }

  using State = std::vector<double>;
  auto rhs = [&](const State& y, State& dy, double) {
    auto a = [&](std::size_t i) { return Complex(y[2 * i], y[2 * i + 1]); };
    for (std::size_t out = 0; out < m; ++out) {
      Complex nl{};
      for (const auto& t : triples[out]) nl += a(t.p) * std::conj(a(t.q)) * Complex(0.0, t.rk) * a(t.r);
      const double k = static_cast<double>(ks[out]);
      const Complex d = Complex(0.0, mu / k) * a(out) + coefficient * k * nl;
      dy[2 * out] = d.real();
      dy[2 * out + 1] = d.imag();
    }
  };

  State y(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    y[2 * i] = initial[i].real();
    y[2 * i + 1] = initial[i].imag();
  }
  if (tau_end > 0.0) {
    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
    odeint::integrate_adaptive(stepper, rhs, y, 0.0, tau_end, std::min(1e-4, tau_end));
  }
  std::vector<Complex> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = {y[2 * i], y[2 * i + 1]};
  return out;
}

SpectralAmplitude galerkin_oracle(const SpectralAmplitude& a, int kmax, double mu, double coefficient, double tau_end,
                                  double tol) {
  if (kmax < 1 || kmax >= a.grid.nyquist()) throw InvalidInput("kmax must satisfy 1 <= kmax < n/2");
  std::vector<int> ks;
  std::vector<Complex> c;
  for (int k = -kmax; k <= kmax; ++k) {
    if (k == 0) continue;
    ks.push_back(k);
    c.push_back(a.at(k));
  }
  const auto evolved = galerkin_oracle(ks, c, mu, coefficient, tau_end, tol);
  SpectralAmplitude out(a.grid);
  for (std::size_t i = 0; i < ks.size(); ++i) out.at(ks[i]) = evolved[i];
  return out;
}

}  // namespace resonance
