#include "resonance/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace resonance::fft {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(n); it != plans_.end()) return it->second;
    // The planner is not thread-safe; execution with fftw_execute_dft is.
    std::vector<Complex> a(n), b(n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const int ni = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_1d(ni, pa, pb, FFTW_FORWARD, flags),
               fftw_plan_dft_1d(ni, pa, pb, FFTW_BACKWARD, flags)};
    if (!p.forward || !p.backward) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void execute(fftw_plan plan, std::span<const Complex> in, std::span<Complex> out) {
  if (in.size() != out.size()) throw std::invalid_argument("fft: size mismatch");
  // FFTW takes a non-const input pointer but does not modify it for out-of-place plans.
  auto* pi = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  auto* po = reinterpret_cast<fftw_complex*>(out.data());
  if (in.data() == out.data()) {
    std::vector<Complex> tmp(in.begin(), in.end());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()), po);
  } else {
    fftw_execute_dft(plan, pi, po);
  }
}

}  // namespace

void forward(std::span<const Complex> in, std::span<Complex> out) {
  execute(cache().get(in.size()).forward, in, out);
}

void backward(std::span<const Complex> in, std::span<Complex> out) {
  execute(cache().get(in.size()).backward, in, out);
}

}  // namespace resonance::fft
