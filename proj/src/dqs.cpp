#include "resonance/dqs.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "resonance/errors.hpp"
#include "resonance/fft.hpp"
#include "resonance/spectral.hpp"

namespace resonance {
namespace {

/// Evaluates the DQS right-hand side with reusable padded buffers.
class DqsOperator {
 public:
  DqsOperator(const PeriodicGrid& grid, double mu, double coefficient)
      : grid_(grid), m_(dealiased_size(grid.size(), 3)), mu_(mu), c_(coefficient), pa_(m_), paz_(m_), fa_(m_), faz_(m_) {}

  void apply(std::span<const Complex> a, std::span<Complex> out) {
    const std::size_t n = grid_.size();
    const std::size_t half = n / 2;
    std::fill(pa_.begin(), pa_.end(), Complex{});
    std::fill(paz_.begin(), paz_.end(), Complex{});
    pa_[0] = a[0];
    for (std::size_t j = 1; j < half; ++j) {
      pa_[j] = a[j];
      pa_[m_ - j] = a[n - j];
      const double k = static_cast<double>(j);
      paz_[j] = Complex(0.0, k) * a[j];
      paz_[m_ - j] = Complex(0.0, -k) * a[n - j];
    }
    fft::backward(pa_, fa_);
    fft::backward(paz_, faz_);
    for (std::size_t i = 0; i < m_; ++i) fa_[i] = std::norm(fa_[i]) * faz_[i];
    fft::forward(fa_, pa_);
    const double scale = 1.0 / static_cast<double>(m_);

    out[0] = {};
    out[half] = {};
    for (std::size_t j = 1; j < half; ++j) {
      const double k = static_cast<double>(j);
      // -μ/(ik) a_k - i c (ik) N_k = iμ/k a_k + c k N_k
      out[j] = Complex(0.0, mu_ / k) * a[j] + c_ * k * scale * pa_[j];
      out[n - j] = Complex(0.0, -mu_ / k) * a[n - j] - c_ * k * scale * pa_[m_ - j];
    }
  }

 private:
  PeriodicGrid grid_;
  std::size_t m_;
  double mu_, c_;
  std::vector<Complex> pa_, paz_, fa_, faz_;
};

// The mean is required to vanish only when the ∂⁻¹ term is present.
void check_zero_mean(const SpectralAmplitude& a, double mu) {
  if (mu == 0.0) return;
  const double scale = std::max(1.0, std::sqrt(a.energy()));
  if (std::abs(a.coeffs[0]) > 1e-12 * scale) throw DegenerateInput("DQS amplitude must have zero mean");
}

// Non-finite entries propagate, so a NaN residual never passes a tolerance test.
double max_norm(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& c : v) {
    const double x = std::abs(c);
    if (!(x <= m)) m = x;
  }
  return m;
}

/// Least-squares Anderson mixing over real coordinates (Re, Im of every coefficient).
class AndersonMixer {
 public:
  explicit AndersonMixer(int depth) : depth_(depth) {}

  void reset() {
    xs_.clear();
    rs_.clear();
  }

  /// Given the iterate x, its image g = G(x) and residual r = g - x, returns the next iterate.
  std::vector<Complex> next(const std::vector<Complex>& x, const std::vector<Complex>& g,
                            const std::vector<Complex>& r) {
    if (depth_ <= 0) return g;
    xs_.push_back(x);
    rs_.push_back(r);
    if (static_cast<int>(xs_.size()) > depth_ + 1) {
      xs_.pop_front();
      rs_.pop_front();
    }
    const std::size_t cols = xs_.size() - 1;
    if (cols == 0) return g;

    const std::size_t len = r.size();
    Eigen::MatrixXd dr(2 * len, static_cast<Eigen::Index>(cols));
    Eigen::VectorXd rhs(2 * len);
    for (std::size_t i = 0; i < len; ++i) {
      rhs(2 * i) = r[i].real();
      rhs(2 * i + 1) = r[i].imag();
    }
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t i = 0; i < len; ++i) {
        const Complex d = rs_[c + 1][i] - rs_[c][i];
        dr(2 * i, c) = d.real();
        dr(2 * i + 1, c) = d.imag();
      }
    }
    const Eigen::VectorXd gamma = dr.colPivHouseholderQr().solve(rhs);
    if (!gamma.allFinite()) {
      reset();
      return g;
    }
    std::vector<Complex> out = g;
    for (std::size_t c = 0; c < cols; ++c) {
      const double w = gamma(static_cast<Eigen::Index>(c));
      for (std::size_t i = 0; i < len; ++i) {
        // ΔG = Δx + Δr
        out[i] -= w * ((xs_[c + 1][i] - xs_[c][i]) + (rs_[c + 1][i] - rs_[c][i]));
      }
    }
    return out;
  }

 private:
  int depth_;
  std::deque<std::vector<Complex>> xs_, rs_;
};

// The centered second difference underestimates k² by up to π²/4 at the Nyquist mode; scaling by the
// midpoint of [1, π²/4] keeps the preconditioned symbol ratio within [0.58, 1.42].
constexpr double kFdSymbolScale = 0.5 * (1.0 + 0.25 * std::numbers::pi * std::numbers::pi);

/// Applies (I - dt/2 J)⁻¹ for J = -i c ∂z(s ∂z), s = |a|² on the grid, discretized by centered
/// differences in conservation form. Degenerate where s vanishes, like the DQS operator itself.
class StiffPreconditioner {
 public:
  StiffPreconditioner(const PeriodicGrid& grid, std::span<const Complex> phys, double c, double dt) : grid_(grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    const double h = grid.spacing();
    const Complex g = Complex(0.0, -c) * (0.5 * dt * kFdSymbolScale / (h * h));
    std::vector<Eigen::Triplet<Complex>> entries;
    entries.reserve(static_cast<std::size_t>(3 * n));
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index ip = (i + 1) % n, im = (i + n - 1) % n;
      const double sp = 0.5 * (std::norm(phys[i]) + std::norm(phys[ip]));
      const double sm = 0.5 * (std::norm(phys[im]) + std::norm(phys[i]));
      entries.emplace_back(i, i, 1.0 + g * (sp + sm));
      entries.emplace_back(i, ip, -g * sp);
      entries.emplace_back(i, im, -g * sm);
    }
    Eigen::SparseMatrix<Complex> m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    lu_.analyzePattern(m);
    lu_.factorize(m);
    if (lu_.info() != Eigen::Success) throw StepFailure("preconditioner factorization failed", 0, 0.0);
    rhs_.resize(n);
  }

  /// Spectral coefficients in, spectral coefficients out; the Nyquist mode is cleared.
  void apply(std::vector<Complex>& r) {
    const auto phys = to_physical(SpectralAmplitude(grid_, r));
    for (std::size_t i = 0; i < phys.size(); ++i) rhs_(static_cast<Eigen::Index>(i)) = phys[i];
    const Eigen::VectorXcd y = lu_.solve(rhs_);
    r = to_spectral(grid_, std::span<const Complex>(y.data(), static_cast<std::size_t>(y.size()))).coeffs;
    r[grid_.size() / 2] = {};
  }

 private:
  const PeriodicGrid& grid_;
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu_;
  Eigen::VectorXcd rhs_;
};

}  // namespace

void DqsConfig::validate() const {
  if (!(mu >= 0.0)) throw InvalidInput("mu must be non-negative");
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  if (!(tau_end >= 0.0)) throw InvalidInput("tau_end must be non-negative");
  if (!(viscosity_nu >= 0.0)) throw InvalidInput("viscosity_nu must be non-negative");
  if (!(picard_tol > 0.0 && picard_tol <= 1e-6)) throw InvalidInput("picard_tol must lie in (0, 1e-6]");
  if (picard_max_iters < 2) throw InvalidInput("picard_max_iters must be >= 2");
  if (anderson_depth < 0) throw InvalidInput("anderson_depth must be non-negative");
  if (max_dt_halvings < 0) throw InvalidInput("max_dt_halvings must be non-negative");
  if (diagnostic_interval < 0.0) throw InvalidInput("diagnostic_interval must be non-negative");
  if (!std::is_sorted(snapshot_taus.begin(), snapshot_taus.end()))
    throw InvalidInput("snapshot_taus must be sorted");
  for (double t : snapshot_taus)
    if (t < 0.0 || t > tau_end * (1 + 1e-12)) throw InvalidInput("snapshot tau outside [0, tau_end]");
}

SpectralAmplitude dqs_rhs(const SpectralAmplitude& a, double mu, double coefficient) {
  check_zero_mean(a, mu);
  DqsOperator op(a.grid, mu, coefficient);
  SpectralAmplitude out(a.grid);
  op.apply(a.coeffs, out.coeffs);
  return out;
}

SpectralAmplitude implicit_step(const SpectralAmplitude& a, const DqsConfig& config, StepReport* report) {
  return implicit_step(a, config, config.dt, report);
}

SpectralAmplitude implicit_step(const SpectralAmplitude& a, const DqsConfig& config, double dt, StepReport* report) {
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  check_zero_mean(a, config.mu);
  const auto& grid = a.grid;
  const std::size_t n = grid.size();

  std::vector<Complex> a0 = a.coeffs;
  if (config.mu > 0.0) a0[0] = {};
  a0[n / 2] = {};

  // G(x) = x - P(x - a0 - dt F((a0 + x)/2)), P the stiff-part inverse frozen at a0.
  const double c = config.nonlinear_coefficient;
  StiffPreconditioner precond(grid, to_physical(SpectralAmplitude(grid, a0)), c, dt);

  DqsOperator op(grid, config.mu, c);
  std::vector<Complex> mid(n), f(n), g(n), r(n);
  auto picard_map = [&](const std::vector<Complex>& x) {
    for (std::size_t j = 0; j < n; ++j) mid[j] = 0.5 * (a0[j] + x[j]);
    op.apply(mid, f);
    for (std::size_t j = 0; j < n; ++j) r[j] = x[j] - a0[j] - dt * f[j];
    precond.apply(r);
    for (std::size_t j = 0; j < n; ++j) g[j] = x[j] - r[j];
    // The mean is conserved: G leaves it at a0[0].
    g[0] = a0[0];
  };

  AndersonMixer mixer(config.anderson_depth);
  const double tol = config.picard_tol * std::max(1.0, max_norm(a0));
  std::vector<Complex> x = a0;
  double best = std::numeric_limits<double>::infinity();
  double res = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < config.picard_max_iters; ++it) {
    picard_map(x);
    for (std::size_t j = 0; j < n; ++j) r[j] = g[j] - x[j];
    res = max_norm(r);
    if (!std::isfinite(res)) break;
    if (res <= tol) {
      x = g;
      break;
    }
    if (res > 1e3 * best) mixer.reset();
    best = std::min(best, res);
    x = mixer.next(x, g, r);
  }
  if (report) {
    report->iterations = it + 1;
    report->increment = res;
  }
  if (!(res <= tol))
    throw StepFailure("implicit midpoint stage did not converge (residual " + std::to_string(res) + ")", it, res);

  x[0] = a0[0];
  x[n / 2] = {};
  SpectralAmplitude out(grid, std::move(x));
  if (config.viscosity_nu > 0.0) out = spectral_viscosity(out, config.viscosity_nu, dt, config.viscosity_cutoff);
  return out;
}

namespace {

SpectralAmplitude advance_with_retries(const SpectralAmplitude& a, const DqsConfig& config, double dt, int halvings,
                                       StepReport& report) {
  try {
    return implicit_step(a, config, dt, &report);
  } catch (const StepFailure&) {
    if (halvings >= config.max_dt_halvings) throw;
    StepReport r1, r2;
    auto half = advance_with_retries(a, config, 0.5 * dt, halvings + 1, r1);
    auto out = advance_with_retries(half, config, 0.5 * dt, halvings + 1, r2);
    report.iterations = r1.iterations + r2.iterations;
    report.increment = std::max(r1.increment, r2.increment);
    return out;
  }
}

}  // namespace

void run_dqs_into(const SpectralAmplitude& initial, const DqsConfig& config, RunOutput& out) {
  config.validate();
  check_zero_mean(initial, config.mu);
  const auto& grid = initial.grid;

  auto& m = out.manifest;
  m.set("solver", "dqs");
  m.set("equation", "i(a_tau + mu*dz^-1 a) = c*(|a|^2 a_z)_z");
  m.set("scheme_space", "Fourier pseudo-spectral, cubic product on 2n grid, Nyquist mode zeroed");
  m.set("scheme_time", "implicit midpoint; Picard iteration preconditioned by a finite-difference stiff part frozen at the step start, Anderson mixing");
  m.set("n", grid.size());
  m.set("mu", config.mu);
  m.set("nonlinear_coefficient", config.nonlinear_coefficient);
  m.set("dt", config.dt);
  m.set("dt_policy", "fixed dt clipped to output times; halved up to max_dt_halvings on stage failure");
  m.set("max_dt_halvings", config.max_dt_halvings);
  m.set("tau_end", config.tau_end);
  m.set("dealiasing", "2x zero padding (exact for cubic terms)");
  m.set("viscosity_nu", config.viscosity_nu);
  m.set("viscosity_cutoff",
        config.viscosity_cutoff < 0 ? default_viscosity_cutoff(grid.size()) : config.viscosity_cutoff);
  m.set("viscosity_profile", "exp(-nu*k^2*dt) for |k| > cutoff, applied after each step");
  m.set("picard_tol", config.picard_tol);
  m.set("picard_max_iters", config.picard_max_iters);
  m.set("anderson_depth", config.anderson_depth);
  m.set("diagnostic_interval", config.diagnostic_interval);
  m.set("status", "running");

  out.diagnostics.columns = {"tau",     "l2_norm", "mean_re",    "mean_im",     "min_abs",
                             "argmin_z", "max_abs", "left_front", "right_front", "picard_iters"};

  const double tie = 1e-12 * std::max(1.0, config.tau_end);
  std::vector<double> events = config.snapshot_taus;
  if (config.diagnostic_interval > 0.0) {
    const auto count = static_cast<long long>(std::floor(config.tau_end / config.diagnostic_interval + 1e-9));
    for (long long k = 0; k <= count; ++k) events.push_back(static_cast<double>(k) * config.diagnostic_interval);
  }
  events.push_back(config.tau_end);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end(), [&](double x, double y) { return std::abs(x - y) <= tie; }),
               events.end());

  SpectralAmplitude a = initial;
  if (config.mu > 0.0) a.coeffs[0] = {};
  a.coeffs[grid.size() / 2] = {};
  double tau = 0.0;
  int last_iters = 0;
  long long steps = 0, total_iters = 0;
  double run_min = std::numeric_limits<double>::infinity(), run_min_tau = 0.0, run_min_z = 0.0;
  std::size_t next_snapshot = 0;

  auto record = [&](bool snapshot_due) {
    const auto phys = to_physical(a);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    std::size_t arg = 0;
    std::vector<double> env(phys.size());
    for (std::size_t j = 0; j < phys.size(); ++j) {
      env[j] = std::abs(phys[j]);
      if (env[j] < lo) {
        lo = env[j];
        arg = j;
      }
      hi = std::max(hi, env[j]);
    }
    // Fronts: smallest and largest z where |a| reaches the configured fraction of its max.
    double left = std::numeric_limits<double>::quiet_NaN(), right = left;
    if (hi > 0.0) {
      for (std::size_t j = 0; j < env.size(); ++j) {
        if (env[j] >= config.front_fraction * hi) {
          if (std::isnan(left)) left = grid.x(j);
          right = grid.x(j);
        }
      }
    }
    out.diagnostics.add_row({tau, kTwoPi * a.energy(), a.coeffs[0].real(), a.coeffs[0].imag(), lo, grid.x(arg), hi,
                             left, right, static_cast<double>(last_iters)});
    if (lo < run_min) {
      run_min = lo;
      run_min_tau = tau;
      run_min_z = grid.x(arg);
    }
    if (snapshot_due) {
      while (next_snapshot < config.snapshot_taus.size() && std::abs(config.snapshot_taus[next_snapshot] - tau) <= tie) {
        out.dqs_snapshots.push_back({tau, phys});
        ++next_snapshot;
      }
    }
  };

  auto finish = [&] {
    m.set("steps", steps);
    m.set("picard_iterations_total", total_iters);
    m.set("min_abs_a", run_min);
    m.set("min_abs_a_tau", run_min_tau);
    m.set("min_abs_a_z", run_min_z);
    m.set("final_tau", tau);
  };

  std::size_t ev = 0;
  if (!events.empty() && events[0] <= tie) {
    record(true);
    ++ev;
  }
  for (; ev < events.size(); ++ev) {
    const double te = events[ev];
    while (tau < te - tie) {
      double dt = std::min(config.dt, te - tau);
      StepReport rep;
      try {
        a = advance_with_retries(a, config, dt, 0, rep);
      } catch (const StepFailure&) {
        m.set("status", "failed");
        m.set("failure", "implicit stage did not converge at tau=" + format_double(tau));
        finish();
        throw;
      }
      tau = (te - (tau + dt) <= tie) ? te : tau + dt;
      last_iters = rep.iterations;
      total_iters += rep.iterations;
      ++steps;
      if (config.diagnostic_interval == 0.0 && tau < te - tie) record(false);
    }
    tau = te;
    record(true);
  }
  m.set("status", "ok");
  finish();
}

RunOutput run_dqs(const SpectralAmplitude& initial, const DqsConfig& config) {
  RunOutput out(FieldLayout::Dqs, initial.grid);
  run_dqs_into(initial, config, out);
  return out;
}

void run_mrs_amplitude_into(const SpectralAmplitude& initial, DqsConfig config, RunOutput& out) {
  config.mu = 0.0;
  config.nonlinear_coefficient = kMrsAmplitudeCoefficient;
  if (config.viscosity_nu <= 0.0 && initial.energy() > 0.0) {
    const auto phys = to_physical(initial);
    double hi = 0.0;
    for (const auto& z : phys) hi = std::max(hi, std::abs(z));
    const bool vanishes = std::any_of(phys.begin(), phys.end(), [&](const Complex& z) { return std::abs(z) <= 1e-12 * hi; });
    if (vanishes) throw InvalidInput("amplitude vanishes on part of the grid; viscosity_nu > 0 is required");
  }
  run_dqs_into(initial, config, out);
  out.manifest.set("equation", "i a_tau + ((2/3)|a|^2 a_x)_x = 0");
}

RunOutput run_mrs_amplitude(const SpectralAmplitude& initial, DqsConfig config) {
  RunOutput out(FieldLayout::Dqs, initial.grid);
  run_mrs_amplitude_into(initial, std::move(config), out);
  return out;
}

SpectralAmplitude two_harmonic_initial(const PeriodicGrid& grid) {
  SpectralAmplitude a(grid);
  a.at(1) = -1.0;
  a.at(2) = 0.5 * std::polar(1.0, 4.0 * kPi * kPi);
  return a;
}

SpectralAmplitude single_harmonic_initial(const PeriodicGrid& grid, int n, Complex a0) {
  if (n == 0 || !grid.resolves(n) || n == grid.nyquist()) throw InvalidInput("harmonic not resolved on this grid");
  SpectralAmplitude a(grid);
  a.at(n) = a0;
  return a;
}

double holder_exponent_estimate(std::span<const Complex> a, const PeriodicGrid& grid, std::size_t center,
                                int max_offset) {
  const std::size_t n = a.size();
  const double a0 = std::abs(a[center]);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int j = 1; j <= max_offset; ++j) {
    const double lx = std::log(j * grid.spacing());
    for (int sgn : {-1, 1}) {
      const std::size_t idx = (center + n + static_cast<std::size_t>(sgn * j + static_cast<int>(n))) % n;
      const double d = std::abs(std::abs(a[idx]) - a0);
      if (d <= 0.0) continue;
      const double ly = std::log(d);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++count;
    }
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace resonance
