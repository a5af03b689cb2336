#pragma once

#include <vector>

#include "qclab/grid.hpp"

namespace qclab::fft {

// In-place 2D transforms of an n x n row-major array. inverse() normalizes.
void forward(std::vector<cplx>& data, int n);
void inverse(std::vector<cplx>& data, int n);

// Angular wavenumber of FFT bin `idx` on a grid of physical period 2L.
// The Nyquist bin gets -pi/h; `nyquist` reports it.
struct Wave {
  double k;
  bool nyquist;
};
Wave wavenumber(int idx, int n, double half_width);

struct Mode {
  double kx, ky;            // true wavenumbers
  bool nyq_x, nyq_y;
  bool zero() const { return kx == 0.0 && ky == 0.0; }
  // Derivative symbols, with Nyquist wavenumbers zeroed so real fields stay real.
  cplx sx() const { return nyq_x ? cplx(0.0) : cplx(0.0, kx); }
  cplx sy() const { return nyq_y ? cplx(0.0) : cplx(0.0, ky); }
  cplx d_symbol() const { return 0.5 * (sx() - cplx(0, 1) * sy()); }
  cplx dbar_symbol() const { return 0.5 * (sx() + cplx(0, 1) * sy()); }
};

template <class Symbol>
ComplexField apply_symbol(const ComplexField& f, Symbol&& symbol) {
  const GridSpec& g = f.spec();
  const int n = g.resolution;
  std::vector<cplx> data = f.values();
  forward(data, n);
  for (int a = 0; a < n; ++a) {
    const Wave wx = wavenumber(a, n, g.half_width);
    for (int b = 0; b < n; ++b) {
      const Wave wy = wavenumber(b, n, g.half_width);
      data[static_cast<std::size_t>(a) * n + b] *= symbol(Mode{wx.k, wy.k, wx.nyquist, wy.nyquist});
    }
  }
  inverse(data, n);
  return ComplexField(g, std::move(data));
}

}  // namespace qclab::fft
