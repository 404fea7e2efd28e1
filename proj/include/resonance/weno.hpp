#pragma once

#include <span>
#include <vector>

#include "resonance/grid.hpp"

namespace resonance {

/// Which side of the interface x_{i+1/2} the stencil is biased towards.
/// Left uses cells i-2..i+2 (upwind for rightward transport), Right uses i-1..i+3.
enum class Side { Left, Right };

/// Fifth-order WENO-JS reconstruction of interface values at x_{i+1/2} for every i,
/// treating `cell_values` as periodic cell averages.
std::vector<double> weno5_reconstruct(std::span<const double> cell_values, Side side);

/// Conservative (½w²)_x by finite-difference WENO5 with global Lax–Friedrichs flux
/// splitting, α = max|w|.
RealField burgers_flux_divergence(const RealField& w);

}  // namespace resonance
