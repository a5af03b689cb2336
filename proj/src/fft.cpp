#include "qclab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace qclab::fft {

namespace {

struct Plans {
  fftw_plan fwd;
  fftw_plan inv;
};

// Planning is not thread-safe in FFTW; execution of an existing plan on new
// arrays is. Plans are made once per size and kept for the process lifetime.
const Plans& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> scratch(static_cast<std::size_t>(n) * n);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Plans pl{fftw_plan_dft_2d(n, n, p, p, FFTW_FORWARD, flags),
           fftw_plan_dft_2d(n, n, p, p, FFTW_BACKWARD, flags)};
  return cache.emplace(n, pl).first->second;
}

}  // namespace

void forward(std::vector<cplx>& data, int n) {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_for(n).fwd, p, p);
}

void inverse(std::vector<cplx>& data, int n) {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_for(n).inv, p, p);
  const double s = 1.0 / (static_cast<double>(n) * n);
  for (cplx& v : data) v *= s;
}

Wave wavenumber(int idx, int n, double half_width) {
  const int f = idx < n / 2 ? idx : idx - n;
  return Wave{std::numbers::pi * f / half_width, idx == n / 2};
}

}  // namespace qclab::fft
