#pragma once

#include <cstddef>
#include <span>

#include "resonance/grid.hpp"

namespace resonance::fft {

/// Unnormalized complex DFTs backed by FFTW. Plans are created with FFTW_ESTIMATE,
/// cached per size behind a mutex, and executed through the thread-safe new-array
/// interface, so calls are deterministic and may run concurrently.
///
/// forward:  out_k = Σ_j in_j e^{-2πi jk/n}
/// backward: out_j = Σ_k in_k e^{+2πi jk/n}
void forward(std::span<const Complex> in, std::span<Complex> out);
void backward(std::span<const Complex> in, std::span<Complex> out);

}  // namespace resonance::fft
