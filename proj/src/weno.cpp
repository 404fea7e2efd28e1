#include "resonance/weno.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "resonance/errors.hpp"

namespace resonance {
namespace {

constexpr double kWenoEps = 1e-6;
constexpr int kGhost = 3;

// Value at the right face of the centre cell from (f_{i-2}, ..., f_{i+2}).
inline double weno5_face(double fm2, double fm1, double f0, double fp1, double fp2) {
  const double b0 = 13.0 / 12.0 * (fm2 - 2 * fm1 + f0) * (fm2 - 2 * fm1 + f0) +
                    0.25 * (fm2 - 4 * fm1 + 3 * f0) * (fm2 - 4 * fm1 + 3 * f0);
  const double b1 = 13.0 / 12.0 * (fm1 - 2 * f0 + fp1) * (fm1 - 2 * f0 + fp1) + 0.25 * (fm1 - fp1) * (fm1 - fp1);
  const double b2 = 13.0 / 12.0 * (f0 - 2 * fp1 + fp2) * (f0 - 2 * fp1 + fp2) +
                    0.25 * (3 * f0 - 4 * fp1 + fp2) * (3 * f0 - 4 * fp1 + fp2);
  // Nonlinear weights d_k/(ε+β_k)², all multiplied by Π(ε+β_k)² to need one division.
  const double s0 = (kWenoEps + b0) * (kWenoEps + b0);
  const double s1 = (kWenoEps + b1) * (kWenoEps + b1);
  const double s2 = (kWenoEps + b2) * (kWenoEps + b2);
  const double a0 = 0.1 * s1 * s2;
  const double a1 = 0.6 * s0 * s2;
  const double a2 = 0.3 * s0 * s1;
  const double q0 = 2 * fm2 - 7 * fm1 + 11 * f0;
  const double q1 = -fm1 + 5 * f0 + 2 * fp1;
  const double q2 = 2 * f0 + 5 * fp1 - fp2;
  return (a0 * q0 + a1 * q1 + a2 * q2) / (6.0 * (a0 + a1 + a2));
}

std::vector<double> with_ghosts(std::span<const double> v) {
  std::vector<double> g;
  g.reserve(v.size() + 2 * kGhost);
  g.insert(g.end(), v.end() - kGhost, v.end());
  g.insert(g.end(), v.begin(), v.end());
  g.insert(g.end(), v.begin(), v.begin() + kGhost);
  return g;
}

// Writes the interface values at x_{i+1/2}, i = 0..n-1, into out.
void reconstruct_into(const std::vector<double>& g, std::size_t n, Side side, double* out) {
  const double* p = g.data() + kGhost;
  if (side == Side::Left) {
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      out[i] = weno5_face(p[i - 2], p[i - 1], p[i], p[i + 1], p[i + 2]);
  } else {
    // Mirror image of the left stencil, centred on cell i+1.
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      out[i] = weno5_face(p[i + 3], p[i + 2], p[i + 1], p[i], p[i - 1]);
  }
}

}  // namespace

std::vector<double> weno5_reconstruct(std::span<const double> cell_values, Side side) {
  if (cell_values.size() < 5) throw InvalidInput("WENO5 needs at least 5 cells");
  const auto g = with_ghosts(cell_values);
  std::vector<double> out(cell_values.size());
  reconstruct_into(g, cell_values.size(), side, out.data());
  return out;
}

RealField burgers_flux_divergence(const RealField& w) {
  const std::size_t n = w.values.size();
  double alpha = 0.0;
  for (double x : w.values) alpha = std::max(alpha, std::abs(x));

  // Split fluxes f± = ½(½w² ± αw) with periodic ghost cells.
  thread_local std::vector<double> fp, fm, face;
  fp.resize(n + 2 * kGhost);
  fm.resize(n + 2 * kGhost);
  face.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = w.values[i];
    const double f = 0.5 * x * x;
    fp[i + kGhost] = 0.5 * (f + alpha * x);
    fm[i + kGhost] = 0.5 * (f - alpha * x);
  }
  for (int i = 0; i < kGhost; ++i) {
    fp[i] = fp[n + i];
    fm[i] = fm[n + i];
    fp[n + kGhost + i] = fp[kGhost + i];
    fm[n + kGhost + i] = fm[kGhost + i];
  }
  const double* p = fp.data() + kGhost;
  const double* m = fm.data() + kGhost;
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    face[i] = weno5_face(p[i - 2], p[i - 1], p[i], p[i + 1], p[i + 2]) +
              weno5_face(m[i + 3], m[i + 2], m[i + 1], m[i], m[i - 1]);

  RealField div(w.grid);
  const double inv_h = 1.0 / w.grid.spacing();
  div.values[0] = (face[0] - face[n - 1]) * inv_h;
  for (std::size_t i = 1; i < n; ++i) div.values[i] = (face[i] - face[i - 1]) * inv_h;
  return div;
}

}  // namespace resonance
